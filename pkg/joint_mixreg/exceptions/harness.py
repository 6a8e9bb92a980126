"""Benchmark and cross-validation harness exceptions."""

from .base import JointMixregException


class BenchmarkError(JointMixregException):
    """Raised when too many benchmark replicates fail.

    Attributes:
        failures: Number of dropped replicates
        attempted: Number of replicates attempted
    """

    def __init__(self, message: str, failures: int = 0, attempted: int = 0):
        self.failures = failures
        self.attempted = attempted
        super().__init__(message)
