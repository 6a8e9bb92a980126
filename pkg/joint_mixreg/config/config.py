"""Configuration classes for Joint Mixreg."""

import os
from dataclasses import dataclass, field

from joint_mixreg.exceptions import ConfigurationError

THREADS_ENV_VAR = "JOINT_MIXREG_THREADS"


def _default_workers() -> int:
    """Read the default worker count from the environment."""
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from e
    if value < 1:
        raise ConfigurationError(f"{THREADS_ENV_VAR} must be >= 1, got {value}")
    return value


@dataclass(frozen=True)
class Floors:
    """Relative regularization floors applied during estimation.

    covariance_rel scales trace(Sigma)/p to give the eigenvalue floor of a covariate
    covariance. variance_rel scales the sample variance of y to give the error-variance
    floor. ridge_rel scales trace(D'WD) for the fallback ridge on a weighted normal matrix.
    """

    covariance_rel: float = 1e-8
    variance_rel: float = 1e-10
    ridge_rel: float = 1e-10

    def __post_init__(self):
        for name in ("covariance_rel", "variance_rel", "ridge_rel"):
            value = getattr(self, name)
            if not value > 0:
                raise ConfigurationError(f"Floor {name} must be positive, got {value}")


@dataclass(frozen=True)
class FitConfig:
    """Immutable settings for one EM fit (all restarts).

    All configuration is frozen so a single instance can be shared by
    concurrent fits without copying.
    """

    max_iter: int = 1000
    tol: float = 1e-8  # Relative log-likelihood change
    n_restarts: int = 10
    seed: int = 0
    floors: Floors = field(default_factory=Floors)
    min_effective_weight: float | None = None  # None -> p + q + 2
    max_workers: int = 1  # Parallel restarts
    kmeans_iter: int = 10  # Lloyd steps after seeding the initial partition

    def __post_init__(self):
        """Validate ranges."""
        if self.max_iter < 1:
            raise ConfigurationError(f"max_iter must be >= 1, got {self.max_iter}")
        if not self.tol > 0:
            raise ConfigurationError(f"tol must be > 0, got {self.tol}")
        if self.n_restarts < 1:
            raise ConfigurationError(f"n_restarts must be >= 1, got {self.n_restarts}")
        if self.max_workers < 1:
            raise ConfigurationError(f"max_workers must be >= 1, got {self.max_workers}")
        if self.kmeans_iter < 0:
            raise ConfigurationError(f"kmeans_iter must be >= 0, got {self.kmeans_iter}")
        if self.min_effective_weight is not None and self.min_effective_weight < 0:
            raise ConfigurationError("min_effective_weight must be non-negative")

    def effective_weight_floor(self, p: int, q: int) -> float:
        """Minimum column sum of responsibilities before a component counts as collapsed."""
        if self.min_effective_weight is not None:
            return float(self.min_effective_weight)
        return float(p + q + 2)


@dataclass(frozen=True)
class JointMixregConfig:
    """Application-level defaults shared by the CLI and the orchestrators."""

    # Mixture settings
    n_components: int = 2
    fit: FitConfig = field(default_factory=FitConfig)

    # Functional pipeline settings
    spline_order: int = 5
    grid_points: int = 201
    n_eigen: int = 3

    # Monte Carlo settings
    mc_n: int = 200_000
    mc_chunk_size: int = 50_000

    # Benchmark / CV settings
    test_n: int = 500
    max_failure_rate: float = 0.05
    thresholds: tuple[float, ...] = (0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8)

    # Performance settings
    max_workers: int = field(default_factory=_default_workers)

    def __post_init__(self):
        """Validate ranges and coerce list inputs."""
        if isinstance(self.thresholds, list):
            object.__setattr__(self, "thresholds", tuple(self.thresholds))
        if self.n_components < 1:
            raise ConfigurationError(f"n_components must be >= 1, got {self.n_components}")
        if self.spline_order < 1:
            raise ConfigurationError(f"spline_order must be >= 1, got {self.spline_order}")
        if self.grid_points < 2:
            raise ConfigurationError(f"grid_points must be >= 2, got {self.grid_points}")
        if self.mc_chunk_size < 1:
            raise ConfigurationError("mc_chunk_size must be >= 1")
        if not 0 <= self.max_failure_rate < 1:
            raise ConfigurationError("max_failure_rate must lie in [0, 1)")
        if self.max_workers < 1:
            raise ConfigurationError(f"max_workers must be >= 1, got {self.max_workers}")
