"""Tests for data model classes."""

import numpy as np
import pandas as pd
import pytest

from joint_mixreg.exceptions import (
    DegenerateCovarianceError,
    DimensionMismatchError,
    ValidationError,
)
from joint_mixreg.models import (
    BenchmarkTable,
    Component,
    CurveSample,
    CvResult,
    Dataset,
    LinearModel,
    MixtureModel,
    ModelKind,
    MspeEstimate,
    Responsibilities,
)


class TestModelKind:
    """Tests for ModelKind parsing and flags."""

    def test_parse_is_case_insensitive(self):
        assert ModelKind.parse("JMR") is ModelKind.JMR
        assert ModelKind.parse(" omr ") is ModelKind.OMR
        assert ModelKind.parse(ModelKind.GMM) is ModelKind.GMM

    def test_parse_unknown(self):
        with pytest.raises(ValidationError, match="Unknown model kind"):
            ModelKind.parse("lasso")

    def test_flags(self):
        assert ModelKind.JMR.has_regression and ModelKind.JMR.has_covariate_law
        assert ModelKind.OMR.has_regression and not ModelKind.OMR.has_covariate_law
        assert not ModelKind.GMM.has_regression and ModelKind.GMM.has_covariate_law


class TestComponent:
    """Tests for Component validation."""

    def test_basic_creation(self, make_component):
        c = make_component(alpha=2.0, beta=(1.0, -1.0), mu=(0.0, 1.0))
        assert c.p == 2
        assert c.q == 0
        assert c.has_regression and c.has_covariate_law
        assert c.zeta.shape == (0,)

    def test_arrays_are_read_only(self, make_component):
        c = make_component()
        with pytest.raises(ValueError):
            c.beta[0] = 5.0

    @pytest.mark.parametrize("sigma2", [0.0, -1.0, float("nan")])
    def test_rejects_nonpositive_sigma2(self, sigma2):
        with pytest.raises(ValidationError, match="sigma2"):
            Component(alpha=0.0, beta=np.ones(1), sigma2=sigma2)

    def test_rejects_asymmetric_cov(self):
        with pytest.raises(ValidationError, match="symmetric"):
            Component(mu=np.zeros(2), cov=np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_rejects_indefinite_cov(self):
        with pytest.raises(DegenerateCovarianceError):
            Component(mu=np.zeros(2), cov=np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_rejects_partial_regression(self):
        with pytest.raises(ValidationError, match="together"):
            Component(alpha=1.0, beta=np.ones(1))

    def test_rejects_beta_mu_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            Component(alpha=0.0, beta=np.ones(2), sigma2=1.0, mu=np.zeros(1), cov=np.eye(1))

    def test_linear_predictor_with_invariants(self):
        c = Component(alpha=1.0, beta=np.array([2.0]), zeta=np.array([3.0]), sigma2=1.0)
        out = c.linear_predictor(np.array([[1.0], [2.0]]), np.array([[1.0], [0.0]]))
        np.testing.assert_allclose(out, [1.0 + 2.0 + 3.0, 1.0 + 4.0])

    def test_linear_predictor_requires_z(self):
        c = Component(alpha=1.0, beta=np.array([2.0]), zeta=np.array([3.0]), sigma2=1.0)
        with pytest.raises(DimensionMismatchError):
            c.linear_predictor(np.array([[1.0]]))


class TestMixtureModel:
    """Tests for MixtureModel validation and permutation."""

    def test_basic_creation(self, make_model):
        m = make_model()
        assert m.K == 2
        assert m.p == 1
        assert m.q == 0
        assert "K=2" in str(m)

    def test_pi_must_sum_to_one(self, make_component):
        c = make_component()
        with pytest.raises(ValidationError, match="sum"):
            MixtureModel(pi=np.array([0.5, 0.5 + 1e-9]), components=(c, c))

    def test_pi_must_be_positive(self, make_component):
        c = make_component()
        with pytest.raises(ValidationError, match="positive"):
            MixtureModel(pi=np.array([1.0, 0.0]), components=(c, c))

    def test_kind_mismatch(self, make_component):
        c = make_component(kind=ModelKind.OMR)
        with pytest.raises(ValidationError, match="kind"):
            MixtureModel(pi=np.ones(1), components=(c,), kind=ModelKind.JMR)

    def test_dimension_mismatch(self, make_component):
        a = make_component(beta=(1.0,), mu=(0.0,))
        b = make_component(beta=(1.0, 2.0), mu=(0.0, 0.0))
        with pytest.raises(DimensionMismatchError):
            MixtureModel(pi=np.array([0.5, 0.5]), components=(a, b))

    def test_permuted(self, make_model):
        m = make_model(pi=(0.3, 0.7))
        swapped = m.permuted([1, 0])
        np.testing.assert_array_equal(swapped.pi, [0.7, 0.3])
        assert swapped.components[0] is m.components[1]

    def test_permuted_rejects_non_permutation(self, make_model):
        with pytest.raises(ValidationError):
            make_model().permuted([0, 0])


class TestDataset:
    """Tests for Dataset construction and row operations."""

    def test_defaults_empty_z(self):
        d = Dataset(y=np.arange(3.0), X=np.ones((3, 2)))
        assert (d.n, d.p, d.q) == (3, 2, 0)
        assert d.Z.shape == (3, 0)
        assert not d.has_truth

    def test_one_dimensional_x_is_a_column(self):
        d = Dataset(y=np.arange(4.0), X=np.arange(4.0))
        assert d.X.shape == (4, 1)

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError, match="non-finite"):
            Dataset(y=np.array([1.0, np.nan]), X=np.ones((2, 1)))

    def test_rejects_row_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            Dataset(y=np.arange(3.0), X=np.ones((2, 1)))

    def test_rejects_fractional_truth(self):
        with pytest.raises(ValidationError, match="truth"):
            Dataset(y=np.zeros(2), X=np.ones((2, 1)), truth=np.array([0.5, 1.0]))

    def test_design_matrix_column_order(self):
        d = Dataset(y=np.zeros(2), X=np.array([[5.0], [6.0]]), Z=np.array([[7.0], [8.0]]))
        np.testing.assert_array_equal(d.design_matrix(), [[1.0, 7.0, 5.0], [1.0, 8.0, 6.0]])

    def test_without(self, make_dataset):
        d = make_dataset(n=5, truth=True)
        rest = d.without(2)
        assert rest.n == 4
        np.testing.assert_array_equal(rest.y, np.delete(d.y, 2))
        np.testing.assert_array_equal(rest.truth, np.delete(d.truth, 2))


class TestResponsibilities:
    """Tests for Responsibilities."""

    def test_rows_must_sum_to_one(self):
        with pytest.raises(ValidationError, match="sum"):
            Responsibilities(np.array([[0.5, 0.4]]))

    def test_labels_break_ties_to_smaller_index(self):
        tau = Responsibilities(np.array([[0.5, 0.5], [0.2, 0.8]]))
        np.testing.assert_array_equal(tau.labels(), [0, 1])

    def test_from_labels(self):
        tau = Responsibilities.from_labels([1, 0, 1], 2)
        np.testing.assert_array_equal(tau.weights, [1.0, 2.0])
        assert tau.K == 2


class TestLinearModel:
    """Tests for LinearModel."""

    def test_predict(self):
        lm = LinearModel(alpha=1.0, beta=np.array([2.0]), zeta=np.zeros(0), sigma2=0.0)
        np.testing.assert_allclose(lm.predict(np.array([[1.0], [3.0]])), [3.0, 7.0])


class TestReports:
    """Tests for report records."""

    def test_mspe_estimate_within(self):
        a = MspeEstimate(value=1.0, std_error=0.1, n=100)
        b = MspeEstimate(value=1.2, std_error=0.1, n=100)
        assert a.within(b)
        assert not a.within(MspeEstimate(value=2.0, std_error=0.1, n=100))

    def test_benchmark_records_long_format(self):
        table = BenchmarkTable(scenario=1, n=100, seed=3, replicates=10, failures=0)
        table.mspe["JMR"] = 0.1
        table.mcr["JMR"] = 0.02
        table.rmse["JMR"] = {"pi1": 0.05}
        records = table.records()
        assert [r["metric"] for r in records] == ["mspe", "mcr", "rmse_pi1"]
        assert all(r["scenario"] == 1 and r["seed"] == 3 for r in records)

    def test_cv_result_ignores_failed_folds(self):
        result = CvResult(
            method="jmr",
            subject_ids=("a", "b", "c"),
            predictions=np.array([1.0, np.nan, 3.0]),
            squared_errors=np.array([1.0, np.nan, 3.0]),
            posteriors=None,
            failed_folds=(1,),
            seed=0,
        )
        assert result.cv == pytest.approx(2.0)
        frame = result.to_frame()
        assert isinstance(frame, pd.DataFrame)
        assert list(frame["subject_id"]) == ["a", "b", "c"]


class TestCurveSample:
    """Tests for CurveSample validation."""

    def test_times_must_increase(self):
        with pytest.raises(ValidationError, match="increasing"):
            CurveSample(
                subject_ids=("s1",),
                times=(np.array([0.0, 0.5, 0.5]),),
                values=(np.zeros(3),),
                domain=(0.0, 1.0),
            )

    def test_times_within_domain(self):
        with pytest.raises(ValidationError, match="outside"):
            CurveSample(
                subject_ids=("s1",),
                times=(np.array([0.0, 2.0]),),
                values=(np.zeros(2),),
                domain=(0.0, 1.0),
            )

    def test_pooled_times(self):
        raw = CurveSample(
            subject_ids=("a", "b"),
            times=(np.array([0.0, 1.0]), np.array([0.5, 1.0])),
            values=(np.zeros(2), np.zeros(2)),
            domain=(0.0, 1.0),
        )
        np.testing.assert_array_equal(raw.pooled_times(), [0.0, 0.5, 1.0])
        assert raw.min_observations == 2
