"""Key-value configuration files mirroring command-line flags."""

import json
import logging
from pathlib import Path
from typing import Any

from joint_mixreg.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


def load_option_file(path: Path) -> dict[str, Any]:
    """Load a JSON object of CLI option values.

    Keys may use dashes or underscores (``k-max`` and ``k_max`` are equivalent);
    they are returned in argparse ``dest`` form.

    Args:
        path: Path to the JSON file

    Returns:
        Mapping of option dest names to values

    Raises:
        ConfigurationError: If the file is missing, is not valid JSON, or is not an object
    """
    try:
        with path.open("r", encoding="utf-8") as f:
            raw = json.load(f)
    except FileNotFoundError as e:
        raise ConfigurationError(f"Config file not found: {path}") from e
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ConfigurationError(f"Invalid config file {path}: {e}") from e

    if not isinstance(raw, dict):
        raise ConfigurationError(f"Config file {path} must contain a JSON object")

    options = {_to_dest(key): value for key, value in raw.items()}
    logger.debug(f"Loaded {len(options)} option(s) from {path}")
    return options


def _to_dest(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_")
