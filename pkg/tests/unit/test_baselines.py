"""Tests for baselines module."""

import numpy as np
import pytest

from joint_mixreg.exceptions import (
    DegenerateClusterError,
    SingularDesignError,
    ValidationError,
)
from joint_mixreg.models import Dataset, MixtureModel, ModelKind
from joint_mixreg.services.baselines import fit_gmm_covariate, fit_mbc, fit_ols
from joint_mixreg.services.density import sample
from joint_mixreg.services.prediction import posterior_matrix


class TestFitOls:
    """Tests for fit_ols function."""

    def test_exact_line(self):
        x = np.linspace(0.0, 1.0, 12)
        d = Dataset(y=1.0 + 2.0 * x, X=x)

        lm = fit_ols(d)

        assert lm.alpha == pytest.approx(1.0, abs=1e-12)
        assert lm.beta[0] == pytest.approx(2.0, abs=1e-12)
        assert lm.sigma2 == pytest.approx(0.0, abs=1e-24)

    def test_with_invariants(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(30, 2))
        Z = rng.normal(size=(30, 1))
        d = Dataset(y=0.5 + X @ np.array([1.0, -2.0]) + 3.0 * Z[:, 0], X=X, Z=Z)

        lm = fit_ols(d)

        np.testing.assert_allclose(lm.beta, [1.0, -2.0], atol=1e-10)
        np.testing.assert_allclose(lm.zeta, [3.0], atol=1e-10)

    def test_matches_lstsq(self, make_dataset):
        d = make_dataset(n=50, p=2, q=1, seed=4)

        lm = fit_ols(d)

        coef, rss, *_ = np.linalg.lstsq(d.design_matrix(), d.y, rcond=None)
        assert lm.alpha == pytest.approx(coef[0])
        np.testing.assert_allclose(lm.beta, coef[2:], rtol=1e-8)
        assert lm.sigma2 == pytest.approx(rss[0] / d.n)

    def test_intercept_only(self):
        y = np.array([1.0, 2.0, 3.0, 6.0])
        d = Dataset(y=y, X=np.zeros((4, 0)))

        lm = fit_ols(d)

        assert lm.alpha == pytest.approx(3.0)
        assert lm.sigma2 == pytest.approx(np.var(y))

    def test_collinear_design(self):
        x = np.arange(6.0)
        d = Dataset(y=x, X=np.column_stack([x, 2.0 * x]))

        with pytest.raises(SingularDesignError):
            fit_ols(d)

    def test_empty(self):
        with pytest.raises(ValidationError):
            fit_ols(Dataset(y=np.zeros(0), X=np.zeros((0, 1))))


class TestFitGmmCovariate:
    """Tests for fit_gmm_covariate function."""

    def test_recovers_means(self, make_model, fit_config):
        d = sample(make_model(pi=(0.3, 0.7)), 400, seed=2)

        gmm = fit_gmm_covariate(d.X, 2, fit_config)

        assert gmm.kind is ModelKind.GMM
        assert gmm.components[0].mu[0] == pytest.approx(3.0, abs=0.3)
        assert gmm.components[1].mu[0] == pytest.approx(-3.0, abs=0.3)

    def test_single_component_is_sample_moments(self, fit_config):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(80, 2)) @ np.array([[1.0, 0.4], [0.0, 0.7]]) + 2.0

        gmm = fit_gmm_covariate(X, 1, fit_config)

        (c,) = gmm.components
        np.testing.assert_allclose(c.mu, X.mean(axis=0), rtol=1e-10)
        np.testing.assert_allclose(c.cov, np.cov(X.T, bias=True), rtol=1e-10)


class TestFitMbc:
    """Tests for fit_mbc function."""

    def test_cluster_regressions(self, make_model, fit_config):
        d = sample(make_model(pi=(0.3, 0.7)), 400, seed=2)

        mbc = fit_mbc(d, 2, fit_config)

        assert mbc.K == 2
        assert mbc.labels.shape == (d.n,)
        assert mbc.cluster_fits[0].beta[0] == pytest.approx(-1.0, abs=0.15)
        assert mbc.cluster_fits[1].beta[0] == pytest.approx(1.0, abs=0.15)

    def test_predictive_uses_gmm_posteriors(self, make_model, fit_config):
        d = sample(make_model(), 200, seed=3)

        mbc = fit_mbc(d, 2, fit_config)

        assert mbc.predictive.kind is ModelKind.JMR
        np.testing.assert_allclose(
            posterior_matrix(mbc.predictive, d.X), posterior_matrix(mbc.gmm, d.X)
        )

    def test_labels_are_read_only(self, make_model, fit_config):
        mbc = fit_mbc(sample(make_model(), 200, seed=3), 2, fit_config)

        with pytest.raises(ValueError):
            mbc.labels[0] = 1

    def test_degenerate_cluster(self, mocker, make_component, make_dataset, fit_config):
        """A cluster that captures no points cannot carry its own regression."""
        gmm = MixtureModel(
            pi=np.array([0.5, 0.5]),
            components=(
                make_component(mu=(0.0,), kind=ModelKind.GMM),
                make_component(mu=(1000.0,), kind=ModelKind.GMM),
            ),
            kind=ModelKind.GMM,
        )
        mocker.patch("joint_mixreg.services.baselines.fit_gmm_covariate", return_value=gmm)

        with pytest.raises(DegenerateClusterError, match="Cluster 1"):
            fit_mbc(make_dataset(n=30), 2, fit_config)
