"""Tests for the simulation benchmark orchestrator."""

from dataclasses import replace

import numpy as np
import pytest

from joint_mixreg.exceptions import BenchmarkError, ValidationError
from joint_mixreg.orchestration.benchmark_runner import (
    BENCHMARK_COLUMNS,
    METHODS,
    BenchmarkRunner,
    _parameter_errors,
    align_to_truth,
    benchmark_frame,
    misclassification_count,
    misclassification_rate,
    parameter_names,
)
from joint_mixreg.services.scenarios import make_scenario, scenario_model
from joint_mixreg.utils.seeding import derive_seed

TRAIN_N = 80
SCENARIO_PARAMETERS = {
    "pi1", "pi2", "alpha1", "alpha2", "beta11", "beta12", "beta21", "beta22",
    "sigma2_1", "sigma2_2",
}  # fmt: skip


@pytest.fixture
def runner(test_config, null_presenter):
    return BenchmarkRunner(test_config, null_presenter)


class TestMisclassification:
    """Tests for permutation-minimized misclassification."""

    def test_swapped_labels_count_as_correct(self):
        assert misclassification_count([0, 0, 1, 1], [1, 1, 0, 0], 2) == 0

    def test_one_mismatch(self):
        assert misclassification_count([0, 1, 1, 1], [0, 0, 1, 1], 2) == 1
        assert misclassification_rate([0, 1, 1, 1], [0, 0, 1, 1], 2) == pytest.approx(0.25)

    def test_three_components(self):
        assert misclassification_count([0, 1, 2, 2], [2, 0, 1, 1], 3) == 0

    def test_empty_input(self):
        assert misclassification_rate([], [], 2) == 0.0

    def test_label_out_of_range(self):
        with pytest.raises(ValidationError, match="labels"):
            misclassification_count([0, 2], [0, 1], 2)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError, match="equal length"):
            misclassification_count([0, 1], [0, 1, 1], 2)


class TestAlignToTruth:
    """Tests for align_to_truth function."""

    def test_swapped_components(self):
        fitted = np.array([[0.0, -1.0], [0.0, 1.0]])
        true = np.array([[0.0, 1.0], [0.0, -1.0]])
        assert align_to_truth(fitted, true) == (1, 0)

    def test_ties_keep_identity(self):
        same = np.ones((2, 2))
        assert align_to_truth(same, same) == (0, 1)


class TestParameterErrors:
    """Tests for aligned parameter errors."""

    def test_names(self):
        assert parameter_names(2, 1) == [
            "pi1", "pi2", "alpha1", "alpha2", "beta11", "beta21", "sigma2_1", "sigma2_2",
        ]  # fmt: skip

    def test_truth_has_zero_error(self):
        truth = scenario_model(1)
        comps = truth.components

        errors = _parameter_errors(
            truth.pi,
            np.array([c.alpha for c in comps]),
            np.array([c.beta for c in comps]),
            np.array([c.sigma2 for c in comps]),
            truth,
        )

        assert set(errors) == SCENARIO_PARAMETERS
        assert all(v == 0.0 for v in errors.values())

    def test_errors_follow_aligned_labels(self):
        truth = scenario_model(1)
        comps = truth.components[::-1]
        alphas = np.array([c.alpha for c in comps]) + np.array([0.0, 0.5])

        errors = _parameter_errors(
            truth.pi[::-1],
            alphas,
            np.array([c.beta for c in comps]),
            np.array([c.sigma2 for c in comps]),
            truth,
        )

        # The shifted intercept belongs to true component 1.
        assert errors["alpha1"] == pytest.approx(0.25)
        assert errors["alpha2"] == 0.0
        assert errors["pi1"] == 0.0


class TestBenchmarkRunner:
    """Tests for BenchmarkRunner class."""

    def test_replicate_scores_every_method(self, runner):
        outcomes = runner.run_replicate(1, TRAIN_N, seed=3)

        assert [o.method for o in outcomes] == list(METHODS)
        assert all(o.mspe > 0 for o in outcomes)
        assert outcomes[0].mcr is None
        assert outcomes[0].squared_errors == {}
        for o in outcomes[1:]:
            assert 0.0 <= o.mcr <= 0.5
            assert set(o.squared_errors) == SCENARIO_PARAMETERS

    def test_separated_scenario_beats_ols(self, runner):
        """In the well separated scenario JMR predicts far better than one line."""
        outcomes = {o.method: o for o in runner.run_replicate(1, 200, seed=7)}
        assert outcomes["JMR"].mspe < outcomes["OLS"].mspe
        assert outcomes["JMR"].mcr < 0.1

    def test_run_cell_aggregates(self, runner, recording_progress):
        table = runner.run_cell(1, TRAIN_N, reps=2, seed=5, progress_callback=recording_progress)

        assert (table.scenario, table.n, table.seed) == (1, TRAIN_N, 5)
        assert table.replicates == 2
        assert table.failures == 0
        assert table.methods == list(METHODS)
        assert "OLS" not in table.mcr
        assert set(table.rmse["JMR"]) == SCENARIO_PARAMETERS
        assert set(table.rmse["MBC"]) == SCENARIO_PARAMETERS
        assert recording_progress.starts == [(2, "Benchmark scenario 1, n=80")]
        assert len(recording_progress.progresses) == 2
        assert recording_progress.completes == 1

    def test_run_cell_is_deterministic(self, test_config, null_presenter):
        """Same seed gives the same table regardless of the worker count."""
        parallel = BenchmarkRunner(test_config, null_presenter)
        serial = BenchmarkRunner(replace(test_config, max_workers=1), null_presenter)

        a = parallel.run_cell(3, TRAIN_N, reps=2, seed=9)
        b = serial.run_cell(3, TRAIN_N, reps=2, seed=9)

        assert a.mspe == b.mspe
        assert a.mcr == b.mcr
        assert a.rmse == b.rmse

    def test_rejects_zero_reps(self, runner):
        with pytest.raises(ValidationError, match="reps"):
            runner.run_cell(1, TRAIN_N, reps=0, seed=0)

    def test_too_many_failures(self, test_config, null_presenter, recording_progress):
        def broken(scenario_id, n, seed, test_n):
            raise ValidationError("simulated data cannot be fitted")

        runner = BenchmarkRunner(test_config, null_presenter, dataset_factory=broken)

        with pytest.raises(BenchmarkError) as exc_info:
            runner.run_cell(1, TRAIN_N, reps=3, seed=0, progress_callback=recording_progress)

        assert exc_info.value.failures == 3
        assert exc_info.value.attempted == 3
        assert len(recording_progress.errors) == 3

    def test_failed_replicates_are_dropped(self, test_config, null_presenter, mocker):
        bad_seed = derive_seed(4, 1, TRAIN_N, 0)

        def flaky(scenario_id, n, seed, test_n):
            if seed == bad_seed:
                raise ValidationError("unlucky draw")
            return make_scenario(scenario_id, n, seed, test_n)

        config = replace(test_config, max_failure_rate=0.6)
        runner = BenchmarkRunner(config, null_presenter, dataset_factory=flaky)
        warn = mocker.spy(null_presenter, "show_warning")

        table = runner.run_cell(1, TRAIN_N, reps=2, seed=4)

        assert table.replicates == 1
        assert table.failures == 1
        warn.assert_called_once()
        assert "dropped 1 of 2" in warn.call_args.args[0]

    def test_run_covers_every_cell(self, runner, mocker):
        shown = mocker.spy(runner.presenter, "show_benchmark_table")

        tables = runner.run([1, 3], [TRAIN_N], reps=1, seed=2)

        assert [(t.scenario, t.n) for t in tables] == [(1, TRAIN_N), (3, TRAIN_N)]
        assert shown.call_count == 2


class TestBenchmarkFrame:
    """Tests for benchmark_frame function."""

    def test_long_format(self, runner):
        table = runner.run_cell(1, TRAIN_N, reps=1, seed=1)
        frame = benchmark_frame([table])

        assert list(frame.columns) == list(BENCHMARK_COLUMNS)
        # OLS reports only MSPE; each mixture method adds MCR and ten RMSEs.
        assert len(frame) == 1 + 3 * 12
        ols = frame[frame["method"] == "OLS"]
        assert list(ols["metric"]) == ["mspe"]
        assert set(frame["seed"]) == {1}

    def test_empty(self):
        assert benchmark_frame([]).empty
