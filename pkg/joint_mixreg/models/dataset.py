"""Data models for observation sets and membership posteriors."""

from dataclasses import dataclass

import numpy as np

from joint_mixreg.exceptions import DimensionMismatchError, ValidationError
from joint_mixreg.utils.array_utils import as_matrix, readonly

ROW_SUM_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class Dataset:
    """n paired observations (y_i, x_i) with optional invariant covariates and truth labels.

    X is n x p (p may be 0), Z is n x q (q = 0 when no invariants are given).
    truth holds 0-based membership labels and is only ever used for scoring.
    """

    y: np.ndarray
    X: np.ndarray
    Z: np.ndarray | None = None
    truth: np.ndarray | None = None

    def __post_init__(self):
        y = readonly(np.ravel(np.asarray(self.y, dtype=float)), 1, "y")
        n = y.size
        X = readonly(as_matrix(self.X, n, "X"), 2, "X")
        Z = np.zeros((n, 0)) if self.Z is None else as_matrix(self.Z, n, "Z")
        Z = readonly(Z, 2, "Z")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Z", Z)

        if self.truth is not None:
            truth = np.asarray(self.truth)
            if truth.shape != (n,):
                raise DimensionMismatchError(f"truth has shape {truth.shape}, expected ({n},)")
            if truth.size and (
                not np.all(np.equal(np.mod(truth, 1), 0)) or np.any(np.asarray(truth) < 0)
            ):
                raise ValidationError("truth labels must be non-negative integers")
            truth = truth.astype(int)
            truth.setflags(write=False)
            object.__setattr__(self, "truth", truth)

    @property
    def n(self) -> int:
        return int(self.y.size)

    @property
    def p(self) -> int:
        return int(self.X.shape[1])

    @property
    def q(self) -> int:
        return int(self.Z.shape[1])  # type: ignore[union-attr]

    @property
    def has_truth(self) -> bool:
        return self.truth is not None

    def design_matrix(self) -> np.ndarray:
        """Regression design [1, Z, X] with columns ordered as (alpha, zeta, beta)."""
        return np.column_stack([np.ones(self.n), self.Z, self.X])

    def subset(self, rows) -> "Dataset":
        """Rows selected by an index array or boolean mask."""
        rows = np.asarray(rows)
        return Dataset(
            y=self.y[rows],
            X=self.X[rows],
            Z=self.Z[rows],  # type: ignore[index]
            truth=None if self.truth is None else self.truth[rows],
        )

    def without(self, row: int) -> "Dataset":
        """All rows except one."""
        return self.subset(np.delete(np.arange(self.n), row))

    def __str__(self) -> str:
        return f"Dataset(n={self.n}, p={self.p}, q={self.q}, truth={self.has_truth})"


@dataclass(frozen=True, eq=False)
class Responsibilities:
    """n x K matrix of posterior membership probabilities."""

    tau: np.ndarray

    def __post_init__(self):
        tau = readonly(self.tau, 2, "tau")
        if np.any(tau < 0) or np.any(tau > 1):
            raise ValidationError("Responsibilities must lie in [0, 1]")
        if tau.shape[0] and np.max(np.abs(tau.sum(axis=1) - 1.0)) > ROW_SUM_TOLERANCE:
            raise ValidationError("Responsibility rows must sum to 1")
        object.__setattr__(self, "tau", tau)

    @property
    def n(self) -> int:
        return int(self.tau.shape[0])

    @property
    def K(self) -> int:
        return int(self.tau.shape[1])

    @property
    def weights(self) -> np.ndarray:
        """Effective component sizes: column sums of tau."""
        return self.tau.sum(axis=0)

    def labels(self) -> np.ndarray:
        """Hard assignment by largest posterior; ties go to the smaller index."""
        return np.argmax(self.tau, axis=1)

    def permuted(self, order) -> "Responsibilities":
        """Reorder columns to follow a component permutation."""
        return Responsibilities(self.tau[:, list(order)])

    @classmethod
    def from_labels(cls, labels, n_components: int) -> "Responsibilities":
        """One-hot responsibilities for a hard partition."""
        labels = np.asarray(labels, dtype=int)
        if labels.size and (labels.min() < 0 or labels.max() >= n_components):
            raise ValidationError(f"Labels must lie in [0, {n_components})")
        tau = np.zeros((labels.size, n_components))
        tau[np.arange(labels.size), labels] = 1.0
        return cls(tau)
