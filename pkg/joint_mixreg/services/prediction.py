"""Posterior weights, best prediction, hard clustering and posterior thresholds."""

import numpy as np
from scipy.special import softmax

from joint_mixreg.exceptions import (
    DimensionMismatchError,
    UnsupportedOperationError,
    ValidationError,
)
from joint_mixreg.models import Dataset, MixtureModel, PredictionResult
from joint_mixreg.utils.linalg_utils import mvn_logpdf_rows

from .density import component_log_densities


def _covariate_block(m: MixtureModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, m.p) if m.p else X.reshape(-1, 0)
    if X.ndim != 2 or X.shape[1] != m.p:
        raise DimensionMismatchError(f"Covariates have shape {X.shape}, model expects p={m.p}")
    return X


def _invariant_block(m: MixtureModel, Z: np.ndarray | None, n: int) -> np.ndarray | None:
    if m.q == 0:
        if Z is not None and np.asarray(Z).size:
            raise DimensionMismatchError("Model has no invariant covariates but Z was given")
        return None
    if Z is None:
        raise DimensionMismatchError(f"Model expects {m.q} invariant covariate(s)")
    Z = np.asarray(Z, dtype=float).reshape(n, -1)
    if Z.shape[1] != m.q:
        raise DimensionMismatchError(f"Z has {Z.shape[1]} columns, model expects {m.q}")
    return Z


def posterior_matrix(m: MixtureModel, X: np.ndarray) -> np.ndarray:
    """Covariate posteriors p_k(x) for every row of X.

    p_k(x) is proportional to pi_k phi(x; mu_k, cov_k) for models with a
    covariate law; regression-only models return pi on every row.
    """
    X = _covariate_block(m, X)
    n = X.shape[0]
    if not m.kind.has_covariate_law:
        return np.tile(np.asarray(m.pi), (n, 1))
    log_w = np.empty((n, m.K))
    for k, c in enumerate(m.components):
        log_w[:, k] = np.log(m.pi[k]) + mvn_logpdf_rows(X, c.mu, c.chol)  # type: ignore[arg-type]
    return softmax(log_w, axis=1)


def posterior_weights(m: MixtureModel, x: np.ndarray) -> np.ndarray:
    """Posterior membership weights for a single covariate vector."""
    return posterior_matrix(m, np.atleast_1d(np.asarray(x, dtype=float)).reshape(1, -1))[0]


def predict_many(
    m: MixtureModel,
    X: np.ndarray,
    Z: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Best predictions sum_k p_k(x)(alpha_k + zeta_k'z + beta_k'x) and the weights used.

    Returns:
        Tuple of (predictions of length n, n x K posterior matrix)

    Raises:
        UnsupportedOperationError: If the model has no regression part
    """
    if not m.kind.has_regression:
        raise UnsupportedOperationError("A covariate-only mixture cannot predict a response")
    X = _covariate_block(m, X)
    Z = _invariant_block(m, Z, X.shape[0])
    weights = posterior_matrix(m, X)
    linear = np.column_stack([c.linear_predictor(X, Z) for c in m.components])
    return np.sum(weights * linear, axis=1), weights


def predict(m: MixtureModel, x: np.ndarray, z: np.ndarray | None = None) -> PredictionResult:
    """Empirical best prediction at one covariate point."""
    x_row = np.atleast_1d(np.asarray(x, dtype=float)).reshape(1, -1)
    z_row = None if z is None else np.atleast_1d(np.asarray(z, dtype=float)).reshape(1, -1)
    yhat, weights = predict_many(m, x_row, z_row)
    top = int(np.argmax(weights[0]))
    return PredictionResult(
        yhat=float(yhat[0]),
        posteriors=weights[0],
        top_component=top,
        top_posterior=float(weights[0, top]),
    )


def assign_clusters(m: MixtureModel, d: Dataset) -> np.ndarray:
    """argmax_k pi_k f_k(y_i, x_i) per row; ties go to the smaller index."""
    return np.argmax(component_log_densities(m, d), axis=1)


def assign_cluster(
    m: MixtureModel,
    x: np.ndarray,
    y: float,
    z: np.ndarray | None = None,
) -> int:
    """Component with the largest empirical joint posterior for one observation."""
    x_row = np.atleast_1d(np.asarray(x, dtype=float)).reshape(1, -1)
    z_row = None if z is None else np.atleast_1d(np.asarray(z, dtype=float)).reshape(1, -1)
    d = Dataset(y=np.array([float(y)]), X=x_row, Z=z_row)
    return int(assign_clusters(m, d)[0])


def threshold_filter(posteriors: np.ndarray, t: float) -> np.ndarray:
    """Mask of rows whose largest posterior is at least t.

    Raises:
        ValidationError: If t lies outside [0.5, 1)
    """
    if not 0.5 <= t < 1.0:
        raise ValidationError(f"Threshold must lie in [0.5, 1), got {t}")
    posteriors = np.asarray(posteriors, dtype=float)
    if posteriors.ndim != 2:
        raise DimensionMismatchError("Posteriors must be an n x K matrix")
    return posteriors.max(axis=1) >= t
