"""Tests for prediction module."""

import numpy as np
import pytest

from joint_mixreg.exceptions import (
    DimensionMismatchError,
    UnsupportedOperationError,
    ValidationError,
)
from joint_mixreg.models import Component, LinearModel, MixtureModel, ModelKind
from joint_mixreg.services.density import sample
from joint_mixreg.services.em_estimator import canonical_order, canonicalize
from joint_mixreg.services.prediction import (
    assign_cluster,
    assign_clusters,
    posterior_matrix,
    posterior_weights,
    predict,
    predict_many,
    threshold_filter,
)


class TestPosteriors:
    """Tests for covariate posteriors."""

    def test_rows_sum_to_one(self, make_model):
        X = np.linspace(-6, 6, 25).reshape(-1, 1)

        weights = posterior_matrix(make_model(), X)

        np.testing.assert_allclose(weights.sum(axis=1), 1.0, atol=1e-12)

    def test_regression_only_returns_pi(self, make_model):
        weights = posterior_matrix(make_model(kind=ModelKind.OMR, pi=(0.2, 0.8)), np.zeros((3, 1)))

        np.testing.assert_array_equal(weights, [[0.2, 0.8]] * 3)

    def test_midpoint_of_symmetric_model(self, make_model):
        np.testing.assert_allclose(posterior_weights(make_model(), np.zeros(1)), [0.5, 0.5])

    def test_far_point_is_certain(self, make_model):
        """Posteriors are computed in log space, so distant points give exact 0/1 weights."""
        weights = posterior_weights(make_model(), np.array([-500.0]))

        assert weights[0] == pytest.approx(1.0)
        assert np.all(np.isfinite(weights))

    def test_wrong_dimension(self, make_model):
        with pytest.raises(DimensionMismatchError):
            posterior_matrix(make_model(), np.zeros((3, 2)))


class TestPredict:
    """Tests for best prediction."""

    def test_single_component_is_linear(self):
        lm = LinearModel(alpha=1.0, beta=np.array([2.0]), zeta=np.zeros(0), sigma2=0.5)
        m = MixtureModel(
            pi=np.ones(1),
            components=(Component(alpha=1.0, beta=np.array([2.0]), sigma2=0.5),),
            kind=ModelKind.OMR,
        )
        X = np.array([[0.0], [1.0], [-2.0]])

        yhat, weights = predict_many(m, X)

        np.testing.assert_allclose(yhat, lm.predict(X))
        np.testing.assert_array_equal(weights, np.ones((3, 1)))

    def test_inside_a_cluster(self, make_model):
        result = predict(make_model(), np.array([-3.0]))

        assert result.top_component == 0
        assert result.top_posterior == pytest.approx(1.0, abs=1e-6)
        assert result.yhat == pytest.approx(-1.0 + 1.0 * -3.0, abs=1e-4)

    def test_omr_mixes_lines_with_pi(self, make_model):
        yhat, _ = predict_many(make_model(kind=ModelKind.OMR, pi=(0.25, 0.75)), np.array([[2.0]]))

        assert yhat[0] == pytest.approx(0.25 * (-1.0 + 2.0) + 0.75 * (1.0 - 2.0))

    def test_with_invariants(self):
        c = Component(
            alpha=0.0,
            beta=np.ones(1),
            zeta=np.array([2.0]),
            sigma2=1.0,
            mu=np.zeros(1),
            cov=np.eye(1),
        )
        m = MixtureModel(pi=np.ones(1), components=(c,))

        yhat, _ = predict_many(m, np.array([[1.0]]), np.array([[3.0]]))

        assert yhat[0] == pytest.approx(7.0)
        with pytest.raises(DimensionMismatchError):
            predict_many(m, np.array([[1.0]]))

    def test_unexpected_invariants(self, make_model):
        with pytest.raises(DimensionMismatchError):
            predict_many(make_model(), np.zeros((1, 1)), np.ones((1, 1)))

    def test_gmm_cannot_predict(self, make_model):
        with pytest.raises(UnsupportedOperationError):
            predict_many(make_model(kind=ModelKind.GMM), np.zeros((1, 1)))


class TestCanonicalRelabeling:
    """Canonical reordering only renames components."""

    def test_predictions_and_labels_map_through_order(self, make_model):
        m = make_model(pi=(0.3, 0.7), separation=1.0)
        d = sample(m, 50, seed=6)
        order = canonical_order(m)
        canon = canonicalize(m)

        for x in d.X:
            original, relabeled = predict(m, x), predict(canon, x)
            assert relabeled.yhat == pytest.approx(original.yhat, rel=1e-12)
            assert order[relabeled.top_component] == original.top_component
        np.testing.assert_array_equal(
            np.asarray(order)[assign_clusters(canon, d)], assign_clusters(m, d)
        )


class TestAssignClusters:
    """Tests for hard assignment."""

    def test_recovers_truth(self, make_model):
        model = make_model()
        d = sample(model, 300, seed=8)

        assert np.mean(assign_clusters(model, d) == d.truth) > 0.98

    def test_single_point(self, make_model):
        assert assign_cluster(make_model(), np.array([3.0]), 1.0 - 3.0) == 1

    def test_ties_go_to_smaller_index(self, make_component):
        c = make_component()
        m = MixtureModel(pi=np.array([0.5, 0.5]), components=(c, c))

        assert assign_cluster(m, np.array([0.0]), 0.0) == 0


class TestThresholdFilter:
    """Tests for threshold_filter function."""

    def test_mask(self):
        posteriors = np.array([[0.5, 0.5], [0.9, 0.1], [0.3, 0.7]])

        np.testing.assert_array_equal(threshold_filter(posteriors, 0.7), [False, True, True])
        np.testing.assert_array_equal(threshold_filter(posteriors, 0.5), [True, True, True])

    @pytest.mark.parametrize("t", [0.49, 1.0, 1.5])
    def test_out_of_range(self, t):
        with pytest.raises(ValidationError):
            threshold_filter(np.array([[0.5, 0.5]]), t)

    def test_needs_matrix(self):
        with pytest.raises(DimensionMismatchError):
            threshold_filter(np.array([0.5, 0.5]), 0.6)
