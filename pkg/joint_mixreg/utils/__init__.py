"""Utility functions for Joint Mixreg."""

from .array_utils import as_matrix, readonly
from .file_utils import atomic_write_text, derived_path, ensure_directory
from .linalg_utils import (
    LOG_2PI,
    cholesky_lower,
    floor_covariance,
    least_squares_qr,
    mvn_logpdf_rows,
    normal_logpdf,
    symmetrize,
    weighted_least_squares,
)
from .seeding import derive_seed, make_rng
from .sort_utils import natural_order, natural_sort_key

__all__ = [
    "readonly",
    "as_matrix",
    "ensure_directory",
    "atomic_write_text",
    "derived_path",
    "LOG_2PI",
    "symmetrize",
    "floor_covariance",
    "cholesky_lower",
    "mvn_logpdf_rows",
    "normal_logpdf",
    "weighted_least_squares",
    "least_squares_qr",
    "derive_seed",
    "make_rng",
    "natural_sort_key",
    "natural_order",
]
