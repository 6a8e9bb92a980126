"""Custom exceptions for Joint Mixreg."""

from .base import JointMixregException
from .harness import BenchmarkError
from .numerical import (
    ComponentCollapseError,
    DegenerateClusterError,
    DegenerateCovarianceError,
    DegenerateVarianceError,
    FitFailedError,
    NumericalError,
    RankError,
    SingularDesignError,
)
from .validation import (
    ConfigurationError,
    DataParseError,
    DimensionMismatchError,
    GridMismatchError,
    InsufficientObservationsError,
    SubjectMismatchError,
    UnsupportedOperationError,
    ValidationError,
)

__all__ = [
    "JointMixregException",
    "ConfigurationError",
    "ValidationError",
    "DimensionMismatchError",
    "DataParseError",
    "InsufficientObservationsError",
    "SubjectMismatchError",
    "GridMismatchError",
    "UnsupportedOperationError",
    "NumericalError",
    "DegenerateCovarianceError",
    "DegenerateVarianceError",
    "SingularDesignError",
    "ComponentCollapseError",
    "DegenerateClusterError",
    "RankError",
    "FitFailedError",
    "BenchmarkError",
]
