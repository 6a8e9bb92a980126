"""Configuration management for Joint Mixreg."""

from .config import THREADS_ENV_VAR, FitConfig, Floors, JointMixregConfig
from .config_file import load_option_file
from .defaults import create_default_config, create_fit_config

__all__ = [
    "FitConfig",
    "Floors",
    "JointMixregConfig",
    "THREADS_ENV_VAR",
    "create_default_config",
    "create_fit_config",
    "load_option_file",
]
