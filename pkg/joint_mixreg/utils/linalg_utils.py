"""Linear-algebra helpers: covariance floors, Cholesky log-densities, least squares."""

import numpy as np
from scipy import linalg

from joint_mixreg.exceptions import DegenerateCovarianceError, SingularDesignError

LOG_2PI = float(np.log(2.0 * np.pi))


def symmetrize(matrix: np.ndarray) -> np.ndarray:
    """Return (A + A^T) / 2, which is exactly symmetric in floating point."""
    matrix = np.asarray(matrix, dtype=float)
    return (matrix + matrix.T) / 2.0


def covariance_floor(sigma: np.ndarray, rel: float) -> float:
    """Eigenvalue floor for a covariance: rel * trace(Sigma) / p."""
    p = sigma.shape[0]
    if p == 0:
        return 0.0
    trace = float(np.trace(sigma))
    if not np.isfinite(trace) or trace <= 0.0:
        raise DegenerateCovarianceError(f"Covariance has non-positive trace {trace!r}")
    return rel * trace / p


def floor_covariance(sigma: np.ndarray, rel: float) -> np.ndarray:
    """Floor the eigenvalues of a covariance at rel * trace / p.

    A matrix whose spectrum already clears the floor is returned symmetrized
    but otherwise untouched, so exact M-step values survive.

    Raises:
        DegenerateCovarianceError: If Sigma has non-finite entries or non-positive trace
    """
    sigma = symmetrize(sigma)
    p = sigma.shape[0]
    if p == 0:
        return sigma
    if not np.all(np.isfinite(sigma)):
        raise DegenerateCovarianceError("Covariance has non-finite entries")

    floor = covariance_floor(sigma, rel)
    eigvals, eigvecs = linalg.eigh(sigma)
    if eigvals[0] >= floor:
        return sigma
    clipped = np.maximum(eigvals, floor)
    return symmetrize((eigvecs * clipped) @ eigvecs.T)


def cholesky_lower(sigma: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of a positive definite matrix.

    Raises:
        DegenerateCovarianceError: If the matrix is not positive definite
    """
    if sigma.shape[0] == 0:
        return np.zeros((0, 0))
    try:
        return linalg.cholesky(sigma, lower=True)
    except linalg.LinAlgError as e:
        raise DegenerateCovarianceError(f"Covariance is not positive definite: {e}") from e


def mvn_logpdf_rows(x: np.ndarray, mu: np.ndarray, chol: np.ndarray) -> np.ndarray:
    """Multivariate normal log-density for every row of x.

    Works entirely through the triangular factor: log|Sigma| is twice the sum
    of log-diagonal entries and the Mahalanobis term comes from one
    triangular solve, so no determinant is ever exponentiated.

    Args:
        x: (n, p) evaluation points
        mu: (p,) mean
        chol: (p, p) lower Cholesky factor of the covariance

    Returns:
        (n,) log-densities; zeros when p == 0
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n, p = x.shape
    if p == 0:
        return np.zeros(n)
    diff = (x - mu).T
    z = linalg.solve_triangular(chol, diff, lower=True, check_finite=False)
    maha = np.sum(z * z, axis=0)
    log_det = 2.0 * np.sum(np.log(np.diag(chol)))
    return -0.5 * (p * LOG_2PI + log_det + maha)


def normal_logpdf(y: np.ndarray, mean: np.ndarray, var: float) -> np.ndarray:
    """Univariate normal log-density, elementwise."""
    resid = np.asarray(y, dtype=float) - mean
    return -0.5 * (LOG_2PI + np.log(var) + resid * resid / var)


def weighted_least_squares(
    design: np.ndarray,
    y: np.ndarray,
    weights: np.ndarray,
    ridge_rel: float,
) -> np.ndarray:
    """Solve the weighted normal equations (D'WD) b = D'Wy by Cholesky.

    If the normal matrix is not numerically positive definite, a ridge of
    ridge_rel * trace(D'WD) is added and the factorization retried once.

    Raises:
        SingularDesignError: If the ridged system still cannot be factorized
    """
    weighted = design * weights[:, None]
    normal = design.T @ weighted
    rhs = weighted.T @ y
    try:
        factor = linalg.cho_factor(normal, lower=True)
    except linalg.LinAlgError:
        ridge = ridge_rel * float(np.trace(normal))
        if not ridge > 0:
            raise SingularDesignError("Weighted design has zero trace") from None
        try:
            factor = linalg.cho_factor(normal + ridge * np.eye(normal.shape[0]), lower=True)
        except linalg.LinAlgError as e:
            raise SingularDesignError(f"Weighted design is singular after ridge: {e}") from e
    coef = linalg.cho_solve(factor, rhs)
    if not np.all(np.isfinite(coef)):
        raise SingularDesignError("Weighted least squares produced non-finite coefficients")
    return coef


def least_squares_qr(design: np.ndarray, y: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Full-rank least squares through a column-pivoted economic QR.

    Raises:
        SingularDesignError: If the design is rank deficient
    """
    n, m = design.shape
    if n < m:
        raise SingularDesignError(f"Design has {n} rows for {m} coefficients")
    q, r, perm = linalg.qr(design, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size and (diag[0] == 0.0 or diag[-1] <= rtol * diag[0]):
        rank = int(np.sum(diag > rtol * diag[0])) if diag[0] > 0 else 0
        raise SingularDesignError(f"Design is rank deficient (rank {rank} < {m})")
    coef = np.empty(m)
    coef[perm] = linalg.solve_triangular(r, q.T @ y, lower=False)
    return coef
