"""Helpers shared by the CLI subcommands."""

import json
from pathlib import Path
from typing import Any

import numpy as np

from joint_mixreg.config import FitConfig, JointMixregConfig, create_default_config
from joint_mixreg.exceptions import (
    BenchmarkError,
    ConfigurationError,
    JointMixregException,
    NumericalError,
    ValidationError,
)
from joint_mixreg.services.dataset_io import format_float
from joint_mixreg.utils.file_utils import atomic_write_text

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def exit_code_for(error: Exception) -> int:
    """Exit status for an error raised by a subcommand."""
    if isinstance(error, ConfigurationError):
        return EXIT_USAGE
    if isinstance(error, NumericalError | BenchmarkError):
        return EXIT_NUMERICAL
    if isinstance(error, ValidationError | OSError):
        return EXIT_DATA
    if isinstance(error, JointMixregException):
        return EXIT_DATA
    raise error


def _split(value) -> list[str]:
    if isinstance(value, list | tuple):
        return [str(v).strip() for v in value]
    return [part.strip() for part in str(value).split(",") if part.strip()]


def int_list(value, option: str) -> list[int]:
    """Parse "1,2,3" (or a list from a config file) into integers."""
    try:
        return [int(v) for v in _split(value)]
    except ValueError as e:
        raise ConfigurationError(f"{option} expects comma-separated integers, got {value!r}") from e


def float_list(value, option: str) -> list[float]:
    """Parse "0.5,0.6" (or a list from a config file) into floats."""
    try:
        return [float(v) for v in _split(value)]
    except ValueError as e:
        raise ConfigurationError(f"{option} expects comma-separated numbers, got {value!r}") from e


def name_list(value) -> list[str]:
    """Parse "a,b" (or a list from a config file) into names."""
    return _split(value) if value else []


def require_output(args, option: str = "output") -> Path:
    value = getattr(args, option, None)
    if not value:
        raise ConfigurationError(f"--{option.replace('_', '-')} is required")
    return Path(value)


def app_config(args) -> JointMixregConfig:
    """Application config with the options every subcommand understands."""
    overrides: dict[str, Any] = {}
    if getattr(args, "threads", None):
        overrides["max_workers"] = args.threads
    return create_default_config(**overrides)


def fit_config(args, config: JointMixregConfig) -> FitConfig:
    """EM settings from --restarts, --seed, --max-iter, --tol and --threads."""
    fields = {
        "n_restarts": getattr(args, "restarts", None),
        "seed": getattr(args, "seed", None),
        "max_iter": getattr(args, "max_iter", None),
        "tol": getattr(args, "tol", None),
    }
    overrides = {k: v for k, v in fields.items() if v is not None}
    return FitConfig(max_workers=config.max_workers, **overrides)


def write_json(path: Path, payload: dict) -> Path:
    """Write a JSON object with sorted keys, floats as round-trip strings."""

    def encode(value):
        if isinstance(value, dict):
            return {str(k): encode(v) for k, v in value.items()}
        if isinstance(value, list | tuple):
            return [encode(v) for v in value]
        if isinstance(value, np.ndarray):
            return encode(value.tolist())
        if isinstance(value, bool | np.bool_):
            return bool(value)
        if isinstance(value, int | np.integer):
            return int(value)
        if isinstance(value, float | np.floating):
            return format_float(value)
        return value

    text = json.dumps(encode(payload), indent=2, sort_keys=True) + "\n"
    return atomic_write_text(Path(path), text)
