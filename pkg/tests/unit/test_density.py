"""Tests for density module."""

import numpy as np
import pytest
from scipy import stats

from joint_mixreg.exceptions import (
    DimensionMismatchError,
    UnsupportedOperationError,
    ValidationError,
)
from joint_mixreg.models import Component, Dataset, MixtureModel, ModelKind
from joint_mixreg.services.density import (
    component_joint_logdensity,
    component_log_densities,
    loglik,
    mvn_logpdf,
    sample,
)


class TestMvnLogpdf:
    """Tests for mvn_logpdf function."""

    def test_matches_scipy(self):
        cov = np.array([[2.0, 0.3], [0.3, 0.5]])
        mu = np.array([1.0, -1.0])
        x = np.array([0.2, 0.4])

        expected = stats.multivariate_normal(mu, cov).logpdf(x)

        assert mvn_logpdf(x, mu, cov) == pytest.approx(expected, rel=1e-12)

    def test_scalar_input(self):
        assert mvn_logpdf(0.5, 0.0, 4.0) == pytest.approx(stats.norm(0, 2).logpdf(0.5))

    def test_far_point_stays_finite(self):
        """A point 1e4 standard deviations out has a very negative log-density, not -inf."""
        value = mvn_logpdf(np.array([1e4]), np.zeros(1), np.eye(1))
        assert np.isfinite(value)
        assert value < -1e7

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            mvn_logpdf(np.zeros(2), np.zeros(3), np.eye(2))

    def test_singular_covariance_is_floored(self):
        """A rank-deficient covariance is floored, not rejected."""
        value = mvn_logpdf(np.zeros(2), np.zeros(2), np.array([[1.0, 1.0], [1.0, 1.0]]))
        assert np.isfinite(value)


class TestComponentJointLogdensity:
    """Tests for component_joint_logdensity function."""

    def test_sum_of_regression_and_covariate_terms(self, make_component):
        c = make_component(alpha=1.0, beta=(2.0,), sigma2=0.5, mu=(1.0,), cov=[[3.0]])

        value = component_joint_logdensity(4.0, np.array([0.5]), None, c)

        expected = stats.norm(1.0 + 2.0 * 0.5, np.sqrt(0.5)).logpdf(4.0) + stats.norm(
            1.0, np.sqrt(3.0)
        ).logpdf(0.5)
        assert value == pytest.approx(expected, rel=1e-12)

    def test_regression_only(self, make_component):
        c = make_component(alpha=0.0, beta=(1.0,), sigma2=1.0, kind=ModelKind.OMR)

        value = component_joint_logdensity(1.0, np.array([1.0]), None, c)

        assert value == pytest.approx(stats.norm(0, 1).logpdf(0.0))

    def test_invariant_covariates(self):
        c = Component(alpha=0.0, beta=np.array([1.0]), zeta=np.array([2.0]), sigma2=1.0)

        value = component_joint_logdensity(3.0, np.array([1.0]), np.array([1.0]), c)

        assert value == pytest.approx(stats.norm(0, 1).logpdf(0.0))

    def test_missing_z(self):
        c = Component(alpha=0.0, beta=np.array([1.0]), zeta=np.array([2.0]), sigma2=1.0)
        with pytest.raises(DimensionMismatchError):
            component_joint_logdensity(3.0, np.array([1.0]), None, c)

    def test_unexpected_z(self, make_component):
        with pytest.raises(DimensionMismatchError):
            component_joint_logdensity(0.0, np.array([0.0]), np.array([1.0]), make_component())


class TestLoglik:
    """Tests for loglik function."""

    def test_single_component_is_sum_of_logpdfs(self, make_component):
        c = make_component(alpha=0.5, beta=(1.0,), sigma2=2.0, mu=(0.0,), cov=[[1.0]])
        m = MixtureModel(pi=np.ones(1), components=(c,))
        d = Dataset(y=np.array([0.0, 1.0, 2.0]), X=np.array([0.0, 1.0, -1.0]))

        expected = sum(
            stats.norm(0.5 + x, np.sqrt(2.0)).logpdf(y) + stats.norm(0, 1).logpdf(x)
            for y, x in zip(d.y, d.X[:, 0], strict=True)
        )

        assert loglik(m, d) == pytest.approx(expected, rel=1e-12)

    def test_matches_explicit_mixture(self, make_model):
        m = make_model(pi=(0.3, 0.7))
        d = sample(m, 20, seed=1)

        log_dens = component_log_densities(m, d)
        expected = np.sum(np.log(np.exp(log_dens).sum(axis=1)))

        assert loglik(m, d) == pytest.approx(expected, rel=1e-10)

    def test_invariant_under_component_permutation(self, make_component):
        m = MixtureModel(
            pi=np.array([0.2, 0.5, 0.3]),
            components=(
                make_component(alpha=0.0, beta=(1.0,), mu=(-2.0,)),
                make_component(alpha=1.0, beta=(-0.5,), mu=(0.5,), sigma2=0.1),
                make_component(alpha=-1.0, beta=(2.0,), mu=(3.0,), cov=[[0.5]]),
            ),
        )
        d = sample(m, 60, seed=4)
        expected = loglik(m, d)

        for order in ([1, 0, 2], [2, 1, 0], [1, 2, 0]):
            assert loglik(m.permuted(order), d) == pytest.approx(expected, rel=1e-12)

    def test_separated_clusters_do_not_underflow(self, make_model):
        """Points deep in one cluster have a negligible density under the other."""
        m = make_model(separation=200.0, sigma2=1e-4)
        d = sample(m, 50, seed=2)

        assert np.isfinite(loglik(m, d))

    def test_empty_dataset(self, make_model):
        d = Dataset(y=np.zeros(0), X=np.zeros((0, 1)))
        with pytest.raises(ValidationError):
            loglik(make_model(), d)

    def test_dimension_mismatch(self, make_model):
        d = Dataset(y=np.zeros(3), X=np.zeros((3, 2)))
        with pytest.raises(DimensionMismatchError):
            loglik(make_model(), d)


class TestSample:
    """Tests for sample function."""

    def test_deterministic(self, make_model):
        a = sample(make_model(), 30, seed=9)
        b = sample(make_model(), 30, seed=9)

        np.testing.assert_array_equal(a.y, b.y)
        np.testing.assert_array_equal(a.X, b.X)
        np.testing.assert_array_equal(a.truth, b.truth)

    def test_different_seeds_differ(self, make_model):
        assert not np.array_equal(sample(make_model(), 30, 1).y, sample(make_model(), 30, 2).y)

    def test_shapes_and_labels(self, make_model):
        d = sample(make_model(), 40, seed=3)

        assert (d.n, d.p, d.q) == (40, 1, 0)
        assert set(np.unique(d.truth)) <= {0, 1}

    def test_moments_follow_components(self, make_model):
        m = make_model(pi=(0.25, 0.75), separation=5.0)
        d = sample(m, 20_000, seed=4)

        assert np.mean(d.truth == 0) == pytest.approx(0.25, abs=0.02)
        assert np.mean(d.X[d.truth == 1, 0]) == pytest.approx(5.0, abs=0.05)

    def test_noise_free_regression(self, make_component):
        """With tiny sigma2 each y sits on its component's line."""
        c = make_component(alpha=2.0, beta=(3.0,), sigma2=1e-12)
        d = sample(MixtureModel(pi=np.ones(1), components=(c,)), 10, seed=0)

        np.testing.assert_allclose(d.y, 2.0 + 3.0 * d.X[:, 0], atol=1e-4)

    @pytest.mark.parametrize("kind", [ModelKind.OMR, ModelKind.GMM])
    def test_requires_joint_model(self, make_model, kind):
        with pytest.raises(UnsupportedOperationError):
            sample(make_model(kind=kind), 10, seed=0)

    def test_invariants_need_z(self):
        c = Component(
            alpha=0.0,
            beta=np.ones(1),
            zeta=np.ones(1),
            sigma2=1.0,
            mu=np.zeros(1),
            cov=np.eye(1),
        )
        m = MixtureModel(pi=np.ones(1), components=(c,))
        with pytest.raises(UnsupportedOperationError):
            sample(m, 5, seed=0)

        d = sample(m, 5, seed=0, Z=np.ones(5))
        assert d.q == 1
