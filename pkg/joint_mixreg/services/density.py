"""Exact log-density, log-likelihood and sampling for joint mixture models.

All arithmetic stays in log space; mixture sums go through logsumexp so
that separated clusters never underflow.
"""

import logging

import numpy as np
from scipy.special import logsumexp

from joint_mixreg.config import Floors
from joint_mixreg.exceptions import (
    DimensionMismatchError,
    UnsupportedOperationError,
    ValidationError,
)
from joint_mixreg.models import Component, Dataset, MixtureModel, ModelKind
from joint_mixreg.utils.array_utils import as_matrix
from joint_mixreg.utils.linalg_utils import (
    cholesky_lower,
    floor_covariance,
    mvn_logpdf_rows,
    normal_logpdf,
)
from joint_mixreg.utils.seeding import make_rng

logger = logging.getLogger(__name__)


def mvn_logpdf(
    x: np.ndarray,
    mu: np.ndarray,
    cov: np.ndarray,
    floor_rel: float = Floors.covariance_rel,
) -> float:
    """Log of the multivariate normal density at a single point.

    cov is eigenvalue-floored at floor_rel * trace / p before the Cholesky
    factorization.

    Raises:
        DimensionMismatchError: If x, mu and cov disagree
        DegenerateCovarianceError: If cov is not positive definite after flooring
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    p = x.size
    if mu.size != p or cov.shape != (p, p):
        raise DimensionMismatchError(
            f"x has length {p}, mu has length {mu.size}, cov has shape {cov.shape}"
        )
    chol = cholesky_lower(floor_covariance(cov, floor_rel))
    return float(mvn_logpdf_rows(x.reshape(1, p), mu, chol)[0])


def component_logdensity_rows(
    c: Component,
    y: np.ndarray,
    X: np.ndarray,
    Z: np.ndarray | None = None,
) -> np.ndarray:
    """Per-row log f_k(y, x): regression term plus covariate term where present."""
    out = np.zeros(X.shape[0])
    if c.has_regression:
        out += normal_logpdf(y, c.linear_predictor(X, Z), c.sigma2)  # type: ignore[arg-type]
    if c.has_covariate_law:
        out += mvn_logpdf_rows(X, c.mu, c.chol)  # type: ignore[arg-type]
    return out


def component_joint_logdensity(
    y: float,
    x: np.ndarray,
    z: np.ndarray | None,
    c: Component,
) -> float:
    """log phi(y; alpha + zeta'z + beta'x, sigma2) + log phi(x; mu, cov) at one point.

    The covariate term is absent for regression-only components and the
    regression term for covariate-only ones.

    Raises:
        DimensionMismatchError: If x or z do not match the component
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size != c.p:
        raise DimensionMismatchError(f"x has length {x.size}, component expects {c.p}")
    z_row = None
    if c.q:
        if z is None or np.atleast_1d(z).size != c.q:
            raise DimensionMismatchError(f"Component expects z of length {c.q}")
        z_row = np.atleast_1d(np.asarray(z, dtype=float)).reshape(1, c.q)
    elif z is not None and np.atleast_1d(z).size:
        raise DimensionMismatchError("Component has no invariant covariates but z was given")
    return float(component_logdensity_rows(c, np.array([float(y)]), x.reshape(1, -1), z_row)[0])


def check_compatible(m: MixtureModel, d: Dataset) -> None:
    """Raise DimensionMismatchError unless the model can be evaluated on the dataset."""
    if m.p != d.p:
        raise DimensionMismatchError(f"Model has p={m.p}, dataset has p={d.p}")
    if m.kind.has_regression and m.q != d.q:
        raise DimensionMismatchError(f"Model has q={m.q}, dataset has q={d.q}")


def component_log_densities(m: MixtureModel, d: Dataset) -> np.ndarray:
    """n x K matrix of log pi_k + log f_k(y_i, x_i)."""
    check_compatible(m, d)
    out = np.empty((d.n, m.K))
    for k, c in enumerate(m.components):
        out[:, k] = np.log(m.pi[k]) + component_logdensity_rows(c, d.y, d.X, d.Z)
    return out


def loglik(m: MixtureModel, d: Dataset) -> float:
    """Observed-data log-likelihood sum_i log sum_k pi_k f_k(y_i, x_i).

    Raises:
        ValidationError: If the dataset is empty
        DimensionMismatchError: If model and dataset dimensions disagree
    """
    if d.n == 0:
        raise ValidationError("Cannot evaluate a log-likelihood on an empty dataset")
    return float(np.sum(logsumexp(component_log_densities(m, d), axis=1)))


def sample(
    m: MixtureModel,
    n: int,
    seed: int,
    Z: np.ndarray | None = None,
) -> Dataset:
    """Draw n observations with their true component labels.

    Each row draws its label from pi, then x ~ N(mu_k, cov_k) and
    y = alpha_k + zeta_k'z + beta_k'x + e with e ~ N(0, sigma2_k). A model
    with invariant covariates needs their values supplied as Z, since their
    law is not part of the model.

    Raises:
        UnsupportedOperationError: If the model lacks a covariate law or a regression part
    """
    if m.kind is not ModelKind.JMR:
        raise UnsupportedOperationError(
            f"Sampling needs both the covariate law and the regression; kind is {m.kind.value}"
        )
    if n < 0:
        raise ValidationError(f"Sample size must be non-negative, got {n}")
    if m.q and Z is None:
        raise UnsupportedOperationError("Sampling a model with invariant covariates needs Z")
    z_block = np.zeros((n, 0)) if Z is None else as_matrix(Z, n, "Z")
    if z_block.shape[1] != m.q:
        raise DimensionMismatchError(f"Z has {z_block.shape[1]} columns, model expects {m.q}")

    rng = make_rng(seed)
    p = m.p
    labels = rng.choice(m.K, size=n, p=m.pi)
    noise_x = rng.standard_normal((n, p))
    noise_y = rng.standard_normal(n)

    X = np.empty((n, p))
    y = np.empty(n)
    for k, c in enumerate(m.components):
        rows = labels == k
        X[rows] = c.mu + noise_x[rows] @ c.chol.T  # type: ignore[operator]
        mean = c.linear_predictor(X[rows], z_block[rows])
        y[rows] = mean + np.sqrt(c.sigma2) * noise_y[rows]  # type: ignore[arg-type]

    logger.debug(f"Sampled {n} observations from {m}")
    return Dataset(y=y, X=X, Z=None if Z is None else z_block, truth=labels)
