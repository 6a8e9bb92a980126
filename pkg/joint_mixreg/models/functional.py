"""Data models for the functional-covariate pipeline."""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from joint_mixreg.exceptions import DimensionMismatchError, ValidationError
from joint_mixreg.utils.array_utils import readonly


@dataclass(frozen=True, eq=False)
class CurveSample:
    """Discretely observed curves, one entry per subject.

    Times are strictly increasing within each subject and lie in the
    domain [a, b].
    """

    subject_ids: tuple[str, ...]
    times: tuple[np.ndarray, ...]
    values: tuple[np.ndarray, ...]
    domain: tuple[float, float]

    def __post_init__(self):
        ids = tuple(str(s) for s in self.subject_ids)
        if len(set(ids)) != len(ids):
            raise ValidationError("Duplicate subject ids in curve sample")
        if not (len(ids) == len(self.times) == len(self.values)):
            raise DimensionMismatchError("subject_ids, times and values must have equal length")
        a, b = (float(v) for v in self.domain)
        if not a < b:
            raise ValidationError(f"Domain must satisfy a < b, got [{a}, {b}]")

        times = []
        values = []
        for sid, t, v in zip(ids, self.times, self.values, strict=True):
            t = readonly(t, 1, f"times of {sid}")
            v = readonly(v, 1, f"values of {sid}")
            if t.size != v.size:
                raise DimensionMismatchError(f"Subject {sid}: {t.size} times but {v.size} values")
            if t.size > 1 and np.any(np.diff(t) <= 0):
                raise ValidationError(f"Subject {sid}: times must be strictly increasing")
            if t.size and (t[0] < a or t[-1] > b):
                raise ValidationError(f"Subject {sid}: times fall outside [{a}, {b}]")
            times.append(t)
            values.append(v)

        object.__setattr__(self, "subject_ids", ids)
        object.__setattr__(self, "times", tuple(times))
        object.__setattr__(self, "values", tuple(values))
        object.__setattr__(self, "domain", (a, b))

    @property
    def n_subjects(self) -> int:
        return len(self.subject_ids)

    @property
    def min_observations(self) -> int:
        return min((t.size for t in self.times), default=0)

    def pooled_times(self) -> np.ndarray:
        """Sorted unique observation times over all subjects."""
        if not self.times:
            return np.zeros(0)
        return np.unique(np.concatenate(self.times))


@dataclass(frozen=True, eq=False)
class SmoothedCurves:
    """Curves expanded in a common B-spline basis and evaluated on a quadrature grid.

    Curve i is the spline with knot vector ``knots``, order ``order`` (degree
    order - 1) and coefficients ``coefficients[i]``. ``values`` holds the
    curves on ``grid``; ``weights`` are the trapezoid quadrature weights.
    ``derivative`` counts how many times the curves have been differentiated.
    """

    subject_ids: tuple[str, ...]
    order: int
    knots: np.ndarray
    coefficients: np.ndarray
    grid: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    residual_ss: np.ndarray
    derivative: int = 0

    def __post_init__(self):
        object.__setattr__(self, "subject_ids", tuple(str(s) for s in self.subject_ids))
        for name, ndim in (
            ("knots", 1),
            ("coefficients", 2),
            ("grid", 1),
            ("weights", 1),
            ("values", 2),
            ("residual_ss", 1),
        ):
            object.__setattr__(self, name, readonly(getattr(self, name), ndim, name))

        n = len(self.subject_ids)
        if self.coefficients.shape[0] != n or self.values.shape[0] != n:
            raise DimensionMismatchError("Coefficient and value rows must match subject count")
        if self.values.shape[1] != self.grid.size or self.weights.size != self.grid.size:
            raise DimensionMismatchError("Grid, weights and value columns disagree")
        if np.any(np.diff(self.knots) < 0):
            raise ValidationError("Knot vector must be nondecreasing")
        if np.any(self.weights <= 0):
            raise ValidationError("Quadrature weights must be positive")

    @property
    def n_subjects(self) -> int:
        return len(self.subject_ids)

    @property
    def n_basis(self) -> int:
        return int(self.coefficients.shape[1])

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Truncated functional principal components on a quadrature grid.

    eigenfunctions is M x G; each row has unit norm under the grid
    quadrature. cumulative_variance[j] is the fraction of total variance
    explained by the first j + 1 components.
    """

    grid: np.ndarray
    weights: np.ndarray
    mean: np.ndarray
    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray
    cumulative_variance: np.ndarray

    def __post_init__(self):
        for name, ndim in (
            ("grid", 1),
            ("weights", 1),
            ("mean", 1),
            ("eigenvalues", 1),
            ("eigenfunctions", 2),
            ("cumulative_variance", 1),
        ):
            object.__setattr__(self, name, readonly(getattr(self, name), ndim, name))
        G = self.grid.size
        if self.weights.size != G or self.mean.size != G or self.eigenfunctions.shape[1] != G:
            raise DimensionMismatchError("Eigen-system arrays disagree with the grid size")
        if self.eigenfunctions.shape[0] != self.eigenvalues.size:
            raise DimensionMismatchError("One eigenfunction per eigenvalue required")
        if np.any(np.diff(self.eigenvalues) > 0):
            raise ValidationError("Eigenvalues must be sorted in descending order")

    @property
    def M(self) -> int:
        """Truncation level."""
        return int(self.eigenvalues.size)

    def inner(self, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        """Quadrature inner products <f, g> along the last axis."""
        return np.sum(np.asarray(f) * self.weights * np.asarray(g), axis=-1)


@dataclass(frozen=True, eq=False)
class ScoreDesign:
    """Principal component scores for a set of subjects (rows follow subject_ids)."""

    subject_ids: tuple[str, ...]
    scores: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "subject_ids", tuple(str(s) for s in self.subject_ids))
        object.__setattr__(self, "scores", readonly(self.scores, 2, "scores"))
        if self.scores.shape[0] != len(self.subject_ids):
            raise DimensionMismatchError("One score row per subject required")

    @property
    def n_subjects(self) -> int:
        return len(self.subject_ids)

    @property
    def M(self) -> int:
        return int(self.scores.shape[1])

    def to_frame(self) -> pd.DataFrame:
        """Scores as a DataFrame indexed by subject id with columns xi1..xiM."""
        columns = [f"xi{j + 1}" for j in range(self.M)]
        frame = pd.DataFrame(np.asarray(self.scores), columns=columns)
        frame.index = pd.Index(self.subject_ids, name="subject_id")
        return frame


@dataclass(frozen=True, eq=False)
class FunctionalDesign:
    """Inputs for fold-wise functional regression.

    curves are the (possibly differentiated) heterogeneous covariate curves;
    the scores entering the mixture are recomputed from them in every fold.
    response, endpoint, invariants and truth are indexed by subject id.
    endpoint holds X_i(b) and joins invariants as a regression-only column.
    """

    curves: SmoothedCurves
    response: pd.Series
    n_eigen: int
    endpoint: pd.Series | None = None
    invariants: pd.DataFrame | None = None
    truth: pd.Series | None = None

    def __post_init__(self):
        if self.n_eigen < 1:
            raise ValidationError(f"n_eigen must be >= 1, got {self.n_eigen}")

    @property
    def n_subjects(self) -> int:
        return self.curves.n_subjects

    @property
    def subject_ids(self) -> tuple[str, ...]:
        return self.curves.subject_ids
