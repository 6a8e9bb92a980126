"""Input validation and data-shape exceptions."""

from .base import JointMixregException


class ConfigurationError(JointMixregException):
    """Raised when configuration values or CLI options are invalid."""

    pass


class ValidationError(JointMixregException):
    """Raised when input data violates a documented invariant."""

    pass


class DimensionMismatchError(ValidationError):
    """Raised when array shapes disagree (rows, p, q or K)."""

    pass


class DataParseError(ValidationError):
    """Raised when a CSV file cannot be parsed.

    Attributes:
        line: 1-based line number of the offending record, if known
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InsufficientObservationsError(ValidationError):
    """Raised when a curve has fewer observations than basis functions."""

    def __init__(self, message: str, subject_id: str | None = None):
        self.subject_id = subject_id
        super().__init__(message)


class SubjectMismatchError(ValidationError):
    """Raised when per-subject inputs do not line up by subject id."""

    pass


class GridMismatchError(ValidationError):
    """Raised when curves and an eigen-system live on different grids."""

    pass


class UnsupportedOperationError(ValidationError):
    """Raised when an operation is not defined for the model kind."""

    pass
