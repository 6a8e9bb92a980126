"""Default configuration values for Joint Mixreg."""

from .config import FitConfig, JointMixregConfig


def create_default_config(**overrides) -> JointMixregConfig:
    """Create a default configuration with optional overrides.

    Args:
        **overrides: Keyword arguments to override default values

    Returns:
        JointMixregConfig with defaults and overrides applied

    Example:
        config = create_default_config(
            spline_order=4,
            max_workers=4
        )
    """
    return JointMixregConfig(**overrides)


def create_fit_config(**overrides) -> FitConfig:
    """Create an EM fit configuration with optional overrides.

    Example:
        cfg = create_fit_config(n_restarts=3, seed=11)
    """
    return FitConfig(**overrides)
