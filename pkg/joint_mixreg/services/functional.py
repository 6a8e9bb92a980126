"""Functional-covariate pipeline: spline smoothing, differentiation, FPCA and design assembly.

Curves are smoothed onto a common B-spline basis, evaluated on an equally
spaced grid with trapezoid weights, and decomposed by the eigenproblem of
the quadrature-weighted sample covariance.
"""

import logging

import numpy as np
import pandas as pd
from scipy import linalg
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import BSpline

from joint_mixreg.exceptions import (
    DimensionMismatchError,
    GridMismatchError,
    InsufficientObservationsError,
    RankError,
    SingularDesignError,
    SubjectMismatchError,
    UnsupportedOperationError,
    ValidationError,
)
from joint_mixreg.models import CurveSample, Dataset, EigenSystem, ScoreDesign, SmoothedCurves
from joint_mixreg.utils.linalg_utils import least_squares_qr, symmetrize

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 5
DEFAULT_GRID_POINTS = 201


def trapezoid_grid(a: float, b: float, n_points: int = DEFAULT_GRID_POINTS):
    """Equally spaced grid on [a, b] with trapezoid weights summing to b - a."""
    if n_points < 2:
        raise ValidationError(f"A quadrature grid needs at least 2 points, got {n_points}")
    grid = np.linspace(a, b, n_points)
    steps = np.diff(grid)
    weights = np.zeros(n_points)
    weights[:-1] += steps / 2.0
    weights[1:] += steps / 2.0
    return grid, weights


def default_breakpoints(raw: CurveSample, order: int, n_knots: int | None = None) -> np.ndarray:
    """Breakpoints drawn from the pooled observation times.

    The domain ends are always breakpoints; interior ones are chosen evenly by
    rank among the pooled interior times. Unless n_knots is given, as many are
    used as keep the basis dimension at the smallest per-curve observation count.
    """
    a, b = raw.domain
    pooled = raw.pooled_times()
    interior = pooled[(pooled > a) & (pooled < b)]
    if n_knots is None:
        n_knots = raw.min_observations - order + 2
    n_interior = max(int(n_knots) - 2, 0)
    if n_interior >= interior.size:
        chosen = interior
    elif n_interior == 0:
        chosen = interior[:0]
    else:
        idx = np.unique(np.round(np.linspace(0, interior.size - 1, n_interior)).astype(int))
        chosen = interior[idx]
    return np.concatenate([[a], chosen, [b]])


def knot_vector(breakpoints: np.ndarray, order: int) -> np.ndarray:
    """Full knot vector: each domain end repeated to multiplicity ``order``."""
    breakpoints = np.unique(np.asarray(breakpoints, dtype=float))
    degree = order - 1
    return np.concatenate(
        [np.repeat(breakpoints[0], degree), breakpoints, np.repeat(breakpoints[-1], degree)]
    )


def basis_matrix(knots: np.ndarray, order: int, x: np.ndarray) -> np.ndarray:
    """Values of every B-spline basis function at x, shape (len(x), B)."""
    n_basis = knots.size - order
    return BSpline(knots, np.eye(n_basis), order - 1)(np.asarray(x, dtype=float))


def _spline(s: SmoothedCurves) -> BSpline:
    return BSpline(s.knots, np.asarray(s.coefficients).T, s.order - 1)


def smooth_curves(
    raw: CurveSample,
    order: int = DEFAULT_ORDER,
    n_knots: int | None = None,
    breakpoints: np.ndarray | None = None,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> SmoothedCurves:
    """Least-squares projection of each curve onto a common B-spline basis.

    Args:
        raw: Observed curves
        order: Spline order (degree + 1)
        n_knots: Number of breakpoints including the domain ends (default placement only)
        breakpoints: Explicit breakpoints; overrides the default placement
        grid_points: Size of the evaluation grid

    Raises:
        ValidationError: If the order or the breakpoints are invalid
        InsufficientObservationsError: If a curve cannot determine the basis coefficients
    """
    if order < 1:
        raise ValidationError(f"Spline order must be >= 1, got {order}")
    if raw.n_subjects == 0:
        raise ValidationError("No curves to smooth")
    a, b = raw.domain
    if breakpoints is None:
        breakpoints = default_breakpoints(raw, order, n_knots)
    else:
        breakpoints = np.unique(np.concatenate([[a], np.asarray(breakpoints, dtype=float), [b]]))
        if breakpoints[0] < a or breakpoints[-1] > b:
            raise ValidationError(f"Breakpoints must lie within [{a}, {b}]")

    knots = knot_vector(breakpoints, order)
    n_basis = knots.size - order
    grid, weights = trapezoid_grid(a, b, grid_points)
    grid_basis = basis_matrix(knots, order, grid)

    coefficients = np.empty((raw.n_subjects, n_basis))
    residual_ss = np.empty(raw.n_subjects)
    for i, (sid, t, v) in enumerate(zip(raw.subject_ids, raw.times, raw.values, strict=True)):
        if t.size < n_basis:
            raise InsufficientObservationsError(
                f"Subject {sid} has {t.size} observations for {n_basis} basis functions",
                subject_id=sid,
            )
        design = basis_matrix(knots, order, t)
        try:
            coef = least_squares_qr(design, v)
        except SingularDesignError as e:
            raise InsufficientObservationsError(
                f"Subject {sid}: observation times do not determine the spline ({e})",
                subject_id=sid,
            ) from e
        resid = v - design @ coef
        coefficients[i] = coef
        residual_ss[i] = float(resid @ resid)

    logger.info(
        f"Smoothed {raw.n_subjects} curves onto {n_basis} order-{order} B-splines "
        f"({breakpoints.size} breakpoints)"
    )
    return SmoothedCurves(
        subject_ids=raw.subject_ids,
        order=order,
        knots=knots,
        coefficients=coefficients,
        grid=grid,
        weights=weights,
        values=coefficients @ grid_basis.T,
        residual_ss=residual_ss,
    )


def differentiate(s: SmoothedCurves) -> SmoothedCurves:
    """Analytic first derivative of every curve, on the same grid.

    Raises:
        UnsupportedOperationError: For order-1 (piecewise constant) splines
    """
    if s.order < 2:
        raise UnsupportedOperationError("Order-1 splines have no derivative")
    deriv = _spline(s).derivative()
    n_basis = deriv.t.size - deriv.k - 1
    coefficients = np.asarray(deriv.c[:n_basis]).T
    return SmoothedCurves(
        subject_ids=s.subject_ids,
        order=s.order - 1,
        knots=deriv.t,
        coefficients=coefficients,
        grid=s.grid,
        weights=s.weights,
        values=np.asarray(deriv(s.grid)).T,
        residual_ss=s.residual_ss,
        derivative=s.derivative + 1,
    )


def evaluate_curves(s: SmoothedCurves, t: float) -> np.ndarray:
    """Value of every curve at a single point t of the domain."""
    a, b = s.domain
    if not a <= t <= b:
        raise ValidationError(f"t={t} lies outside [{a}, {b}]")
    return np.asarray(_spline(s)(float(t)), dtype=float)


def subset_curves(s: SmoothedCurves, rows) -> SmoothedCurves:
    """Curves for the selected rows (index array or mask)."""
    rows = np.asarray(rows)
    if rows.dtype == bool:
        rows = np.flatnonzero(rows)
    return SmoothedCurves(
        subject_ids=tuple(s.subject_ids[i] for i in rows),
        order=s.order,
        knots=s.knots,
        coefficients=s.coefficients[rows],
        grid=s.grid,
        weights=s.weights,
        values=s.values[rows],
        residual_ss=s.residual_ss[rows],
        derivative=s.derivative,
    )


def _fix_sign(psi: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Make <psi, 1> >= 0; when that is numerically 0, make the first nonzero value positive."""
    mass = float(np.sum(weights * psi))
    scale = float(np.sqrt(np.sum(weights)))
    if abs(mass) > 1e-10 * scale:
        return psi if mass > 0 else -psi
    nonzero = np.flatnonzero(np.abs(psi) > 1e-12 * np.max(np.abs(psi)))
    if nonzero.size and psi[nonzero[0]] < 0:
        return -psi
    return psi


def fpca(s: SmoothedCurves, n_eigen: int) -> EigenSystem:
    """Functional principal components of the smoothed curves.

    The sample covariance (divisor n - 1) is diagonalized through the
    symmetric problem W^{1/2} Gamma W^{1/2} u = lambda u and back-transformed
    as psi = W^{-1/2} u, so each psi has unit norm under the grid quadrature.

    Raises:
        ValidationError: If there are fewer than n_eigen + 1 curves
        RankError: If n_eigen exceeds the numerical rank of the covariance
    """
    n = s.n_subjects
    if n_eigen < 1:
        raise ValidationError(f"Number of eigenfunctions must be >= 1, got {n_eigen}")
    if n < n_eigen + 1:
        raise ValidationError(f"FPCA with M={n_eigen} needs at least {n_eigen + 1} curves, got {n}")

    values = np.asarray(s.values)
    mean = values.mean(axis=0)
    centered = values - mean
    gamma = centered.T @ centered / (n - 1)

    root_w = np.sqrt(s.weights)
    operator = symmetrize(root_w[:, None] * gamma * root_w[None, :])
    eigvals, eigvecs = linalg.eigh(operator)
    eigvals = eigvals[::-1]
    eigvecs = eigvecs[:, ::-1]

    tol = max(float(eigvals[0]), 0.0) * operator.shape[0] * np.finfo(float).eps
    rank = int(np.sum(eigvals > tol)) if eigvals[0] > 0 else 0
    if n_eigen > rank:
        raise RankError(f"Requested {n_eigen} eigenfunctions but the covariance has rank {rank}")

    total = float(np.sum(np.clip(eigvals, 0.0, None)))
    psi = np.array([_fix_sign(eigvecs[:, j] / root_w, s.weights) for j in range(n_eigen)])
    lam = eigvals[:n_eigen]
    cumulative = np.cumsum(lam) / total

    logger.info(
        f"FPCA: M={n_eigen}, cumulative variance "
        + ", ".join(f"{c:.4f}" for c in cumulative)
    )
    return EigenSystem(
        grid=s.grid,
        weights=s.weights,
        mean=mean,
        eigenvalues=lam,
        eigenfunctions=psi,
        cumulative_variance=cumulative,
    )


def project_scores(s: SmoothedCurves, e: EigenSystem) -> ScoreDesign:
    """Scores xi_ij = <X_i - mean, psi_j> under the grid quadrature.

    Raises:
        GridMismatchError: If curves and eigen-system use different grids
    """
    if not (np.array_equal(s.grid, e.grid) and np.array_equal(s.weights, e.weights)):
        raise GridMismatchError("Curves and eigen-system are evaluated on different grids")
    scores = (np.asarray(s.values) - e.mean) @ (e.eigenfunctions * e.weights).T
    return ScoreDesign(subject_ids=s.subject_ids, scores=scores)


def reconstruct_slope(b: np.ndarray, e: EigenSystem) -> np.ndarray:
    """Slope curve beta(t) = sum_j b_j psi_j(t) on the eigen-system grid."""
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if b.size != e.M:
        raise DimensionMismatchError(f"Got {b.size} coefficients for {e.M} eigenfunctions")
    return b @ e.eigenfunctions


def antiderivative_slope(beta: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """gamma(t) = -integral_a^t beta(s) ds on the grid (trapezoid rule).

    With this gamma, <beta, X> = -gamma(b)X(b) + gamma(a)X(a) + <gamma, X'>,
    which turns a level-curve slope into a derivative-curve slope plus an
    endpoint term.
    """
    return -cumulative_trapezoid(np.asarray(beta, dtype=float), np.asarray(grid), initial=0.0)


def _aligned(values, subject_ids: tuple[str, ...], name: str) -> np.ndarray:
    """Values of a Series/DataFrame whose index must list subject_ids in order."""
    index = [str(i) for i in values.index]
    if index != list(subject_ids):
        missing = sorted(set(subject_ids) - set(index))
        extra = sorted(set(index) - set(subject_ids))
        detail = []
        if missing:
            detail.append(f"missing {missing[:5]}")
        if extra:
            detail.append(f"unexpected {extra[:5]}")
        if not detail:
            detail.append("subjects in a different order")
        raise SubjectMismatchError(f"{name} does not match the score subjects: {', '.join(detail)}")
    return np.asarray(values, dtype=float)


def assemble_design(
    scores: ScoreDesign,
    y: pd.Series,
    endpoint: pd.Series | None = None,
    invariants: pd.DataFrame | None = None,
    truth: pd.Series | None = None,
) -> Dataset:
    """Regression dataset with scores as X and endpoint/invariant columns as Z.

    Every input is indexed by subject id and must list the score subjects in
    exactly the same order.

    Raises:
        SubjectMismatchError: If any input's subject ids differ from the scores'
    """
    ids = scores.subject_ids
    response = _aligned(y, ids, "response")
    columns = []
    if endpoint is not None:
        columns.append(_aligned(endpoint, ids, "endpoint").reshape(-1, 1))
    if invariants is not None:
        columns.append(_aligned(invariants, ids, "invariants").reshape(len(ids), -1))
    Z = np.hstack(columns) if columns else None
    labels = None
    if truth is not None:
        labels = _aligned(truth, ids, "truth").astype(int)
    return Dataset(y=response, X=np.asarray(scores.scores), Z=Z, truth=labels)
