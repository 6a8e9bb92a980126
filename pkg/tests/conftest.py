"""Pytest configuration and shared fixtures."""

import numpy as np
import pytest

from joint_mixreg.config import FitConfig, JointMixregConfig
from joint_mixreg.models import Component, CurveSample, Dataset, MixtureModel, ModelKind
from joint_mixreg.presenters import NullPresenter, NullProgressCallback


@pytest.fixture
def temp_dir(tmp_path):
    """Provide a temporary directory for test files."""
    return tmp_path


@pytest.fixture
def fit_config():
    """Provide a small, fast EM configuration."""
    return FitConfig(n_restarts=3, max_iter=300, seed=11)


@pytest.fixture
def test_config(fit_config):
    """Provide an application configuration sized for tests."""
    return JointMixregConfig(
        fit=fit_config,
        test_n=200,
        mc_n=20_000,
        mc_chunk_size=5_000,
        max_workers=2,  # Exercise the thread pools
    )


@pytest.fixture
def null_presenter():
    """Provide a null presenter for testing (no output)."""
    return NullPresenter()


@pytest.fixture
def null_progress():
    """Provide a null progress callback for testing."""
    return NullProgressCallback()


@pytest.fixture
def make_component():
    """Factory fixture for JMR components with sensible defaults."""

    def _make(
        alpha=0.0,
        beta=(1.0,),
        sigma2=0.25,
        mu=(0.0,),
        cov=None,
        zeta=None,
        kind=ModelKind.JMR,
    ):
        beta = np.asarray(beta, dtype=float)
        mu = np.asarray(mu, dtype=float)
        if cov is None:
            cov = np.eye(mu.size)
        fields = {}
        if kind.has_regression:
            fields.update(alpha=alpha, beta=beta, sigma2=sigma2, zeta=zeta)
        if kind.has_covariate_law:
            fields.update(mu=mu, cov=np.asarray(cov, dtype=float))
        return Component(**fields)

    return _make


@pytest.fixture
def make_model(make_component):
    """Factory fixture for a well separated two-component mixture in one covariate."""

    def _make(kind=ModelKind.JMR, pi=(0.5, 0.5), sigma2=0.25, separation=3.0):
        components = (
            make_component(
                alpha=-1.0, beta=(1.0,), sigma2=sigma2, mu=(-separation,), kind=kind
            ),
            make_component(alpha=1.0, beta=(-1.0,), sigma2=sigma2, mu=(separation,), kind=kind),
        )
        return MixtureModel(pi=np.asarray(pi, dtype=float), components=components, kind=kind)

    return _make


@pytest.fixture
def make_dataset():
    """Factory fixture for random datasets (no mixture structure)."""

    def _make(n=50, p=1, q=0, seed=0, truth=False):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(n, p))
        Z = rng.normal(size=(n, q)) if q else None
        y = 1.0 + X.sum(axis=1) + rng.normal(scale=0.5, size=n)
        labels = rng.integers(0, 2, size=n) if truth else None
        return Dataset(y=y, X=X, Z=Z, truth=labels)

    return _make


@pytest.fixture
def make_curves():
    """Factory fixture for curve samples of random quartic polynomials on [0, 1].

    Returns the sample and the (n_subjects, 5) polynomial coefficients in
    increasing degree.
    """

    def _make(n_subjects=12, n_times=15, seed=0, noise=0.0):
        rng = np.random.default_rng(seed)
        coefs = rng.normal(size=(n_subjects, 5))
        t = np.linspace(0.0, 1.0, n_times)
        powers = np.vander(t, 5, increasing=True)
        values = coefs @ powers.T + noise * rng.normal(size=(n_subjects, n_times))
        raw = CurveSample(
            subject_ids=tuple(f"s{i + 1}" for i in range(n_subjects)),
            times=tuple(t for _ in range(n_subjects)),
            values=tuple(values),
            domain=(0.0, 1.0),
        )
        return raw, coefs

    return _make


class RecordingProgress:
    """A real ProgressCallback implementation that records all calls for assertion."""

    def __init__(self):
        self.starts = []
        self.progresses = []
        self.completes = 0
        self.errors = []

    def on_start(self, total: int, description: str) -> None:
        self.starts.append((total, description))

    def on_progress(self, current: int, item_description: str) -> None:
        self.progresses.append((current, item_description))

    def on_complete(self) -> None:
        self.completes += 1

    def on_error(self, item_description: str, error_message: str) -> None:
        self.errors.append((item_description, error_message))


@pytest.fixture
def recording_progress():
    """Provide a progress callback that records all calls for assertion."""
    return RecordingProgress()
