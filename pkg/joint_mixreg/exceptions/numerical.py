"""Numerical failure exceptions raised during estimation."""

from .base import JointMixregException


class NumericalError(JointMixregException):
    """Raised when a computation cannot produce a finite, well-posed result."""

    pass


class DegenerateCovarianceError(NumericalError):
    """Raised when a covariance is not positive definite after flooring."""

    pass


class DegenerateVarianceError(NumericalError):
    """Raised when an error variance is zero after flooring."""

    pass


class SingularDesignError(NumericalError):
    """Raised when a (weighted) regression design is rank deficient."""

    pass


class ComponentCollapseError(NumericalError):
    """Raised when a component's effective weight drops below the floor."""

    def __init__(self, message: str, component: int | None = None, weight: float | None = None):
        self.component = component
        self.weight = weight
        super().__init__(message)


class DegenerateClusterError(NumericalError):
    """Raised when a hard cluster is too small for its own regression."""

    pass


class RankError(NumericalError):
    """Raised when more eigenfunctions are requested than the covariance rank supports."""

    pass


class FitFailedError(NumericalError):
    """Raised when every EM restart failed.

    Attributes:
        diagnostics: One message per failed restart, in restart order
    """

    def __init__(self, message: str, diagnostics: list[str] | None = None):
        self.diagnostics = list(diagnostics or [])
        if self.diagnostics:
            message = f"{message}: " + "; ".join(self.diagnostics)
        super().__init__(message)
