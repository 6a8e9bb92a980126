"""Long-running statistical checks on the simulation scenarios and growth data.

Run with ``pytest -m slow``; they take several minutes.
"""

from itertools import combinations
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from joint_mixreg.config import FitConfig, create_default_config
from joint_mixreg.models import FunctionalDesign, MixtureModel, ModelKind
from joint_mixreg.orchestration import BenchmarkRunner, CrossValidator
from joint_mixreg.orchestration.benchmark_runner import misclassification_count
from joint_mixreg.orchestration.cross_validation import functional_dataset
from joint_mixreg.presenters import NullPresenter
from joint_mixreg.services.dataset_io import (
    align_subjects,
    read_curves,
    read_subject_table,
)
from joint_mixreg.services.density import sample
from joint_mixreg.services.em_estimator import fit
from joint_mixreg.services.functional import (
    differentiate,
    evaluate_curves,
    fpca,
    smooth_curves,
)
from joint_mixreg.services.model_selection import select_k
from joint_mixreg.services.mspe import verify_dominance
from joint_mixreg.services.scenarios import make_scenario, scenario_model

pytestmark = pytest.mark.slow

REPS = 200
FIXTURES = Path(__file__).parent.parent / "fixtures"
GROWTH_FIXTURE = FIXTURES / "growth.csv"
GROWTH_RESPONSE = FIXTURES / "growth_response.csv"


@pytest.fixture(scope="module")
def runner():
    config = create_default_config(fit=FitConfig(n_restarts=5), test_n=500, max_workers=4)
    return BenchmarkRunner(config, NullPresenter())


class TestScenarioBenchmarks:
    """Method orderings over many replicates."""

    def test_scenario_one_ordering(self, runner):
        table = runner.run_cell(1, 300, REPS, seed=2024)

        mspe = table.mspe
        assert mspe["JMR"] < mspe["MBC"] < mspe["OLS"] < mspe["OMR"]
        assert table.mcr["JMR"] < 0.05
        assert table.mcr["OMR"] < 0.10

    def test_scenario_four_methods_agree(self, runner):
        """A shared covariate law leaves nothing for the joint model to exploit."""
        table = runner.run_cell(4, 300, REPS, seed=2024)

        values = list(table.mspe.values())
        gaps = [abs(a - b) / min(a, b) for a, b in combinations(values, 2)]
        assert max(gaps) < 0.10
        assert table.mcr["MBC"] > 0.35

    def test_slope_rmse_shrinks_with_n(self, runner):
        small = runner.run_cell(1, 100, REPS, seed=7)
        large = runner.run_cell(1, 300, REPS, seed=7)

        for name in ("beta12", "beta22"):
            ratio = large.rmse["JMR"][name] / small.rmse["JMR"][name]
            assert 0.45 <= ratio <= 0.72


class TestDominance:
    """Adaptive weighting against fixed and biased weighting."""

    def test_scenario_one_strict(self):
        report = verify_dominance(scenario_model(1), mc_n=200_000, seed=1)
        assert report.all_passed
        assert report.strict_dominance

    def test_scenario_four_no_gain(self):
        report = verify_dominance(scenario_model(4), mc_n=200_000, seed=1)
        assert abs(report.difference.value) <= 3.0 * report.difference.std_error + 1e-12

    def test_equal_moments_biased(self):
        m = scenario_model(4)
        report = verify_dominance(m, mc_n=200_000, seed=1, beta_star=[[0.5, -1.0], [0.0, 0.5]])
        assert report.quadratic_form >= 0.0
        assert report.all_passed


class TestBicSelection:
    """K chosen by BIC across seeds."""

    def test_two_components_found(self):
        cfg = FitConfig(n_restarts=5)
        hits = sum(
            select_k(make_scenario(1, 300, seed)[0], 3, ModelKind.JMR, cfg).best_k == 2
            for seed in range(50)
        )
        assert hits >= 48

    def test_single_component_found(self):
        one = MixtureModel(
            pi=np.array([1.0]), components=scenario_model(1).components[:1], kind=ModelKind.JMR
        )
        cfg = FitConfig(n_restarts=5)
        hits = sum(
            select_k(sample(one, 300, seed), 3, ModelKind.JMR, cfg).best_k == 1
            for seed in range(50)
        )
        assert hits >= 45


@pytest.fixture(scope="module")
def growth_heights():
    """Smoothed height curves from age 3 to 12."""
    return smooth_curves(read_curves(GROWTH_FIXTURE), order=5)


@pytest.fixture(scope="module")
def velocity_design(growth_heights):
    """Velocity curves with the age-12 height as a regression-only covariate."""
    ids = growth_heights.subject_ids
    table = align_subjects(read_subject_table(GROWTH_RESPONSE), ids, GROWTH_RESPONSE)
    endpoint = evaluate_curves(growth_heights, growth_heights.domain[1])

    def build(n_eigen):
        return FunctionalDesign(
            curves=differentiate(growth_heights),
            response=table["y"],
            n_eigen=n_eigen,
            endpoint=pd.Series(endpoint, index=list(ids)),
            truth=table["truth"].astype(int),
        )

    return build


@pytest.mark.skipif(
    not (GROWTH_FIXTURE.exists() and GROWTH_RESPONSE.exists()),
    reason="growth curve fixtures not shipped",
)
class TestGrowthCurves:
    """Growth-curve study.

    growth.csv holds heights (subject_id, t, value) from age 3 to 12 and
    growth_response.csv holds subject_id, y (height at 18) and truth (gender).
    """

    def test_height_variance_explained(self, growth_heights):
        eigen = fpca(growth_heights, 5)

        np.testing.assert_allclose(
            eigen.cumulative_variance[1:], [0.9857, 0.9932, 0.9975, 0.9993], atol=0.01
        )

    def test_velocity_model_beats_baselines(self, velocity_design):
        design = velocity_design(3)
        validator = CrossValidator(NullPresenter(), FitConfig(n_restarts=5), max_workers=4)

        cv = {m: validator.loocv(design, m, 2, seed=1).cv for m in ("jmr", "omr", "ols")}

        assert cv["jmr"] < cv["ols"]
        assert cv["jmr"] < cv["omr"]

    @pytest.mark.parametrize("n_eigen", [2, 3, 4, 5])
    def test_velocity_model_finds_gender(self, velocity_design, n_eigen):
        d = functional_dataset(velocity_design(n_eigen))

        labels = fit(d, 2, ModelKind.JMR, FitConfig(n_restarts=5)).labels()

        assert misclassification_count(labels, d.truth, 2) <= 12
