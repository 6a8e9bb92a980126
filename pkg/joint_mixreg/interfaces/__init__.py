"""Interface protocols for Joint Mixreg."""

from .presenter import PresenterProtocol
from .progress import ProgressCallback

__all__ = ["PresenterProtocol", "ProgressCallback"]
