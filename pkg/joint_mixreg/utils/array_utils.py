"""Helpers for the read-only numpy arrays held by model records."""

import numpy as np

from joint_mixreg.exceptions import DimensionMismatchError, ValidationError


def readonly(values, ndim: int | None = None, name: str = "array") -> np.ndarray:
    """Copy values into a float array that cannot be modified in place.

    Args:
        values: Array-like input
        ndim: Required number of dimensions, if any
        name: Name used in error messages

    Raises:
        DimensionMismatchError: If the dimensionality is wrong
        ValidationError: If any entry is NaN or infinite
    """
    arr = np.array(values, dtype=float)
    if ndim is not None and arr.ndim != ndim:
        raise DimensionMismatchError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


def as_matrix(values, n_rows: int, name: str) -> np.ndarray:
    """Coerce a covariate block to shape (n_rows, columns); 1-d input is one column."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(n_rows, -1) if arr.size == n_rows else arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[0] != n_rows:
        raise DimensionMismatchError(f"{name} has shape {arr.shape}, expected {n_rows} rows")
    return arr
