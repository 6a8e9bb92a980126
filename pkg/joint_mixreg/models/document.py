"""Data model for persisted models and eigen-systems."""

from dataclasses import dataclass, field
from typing import Any

from .functional import EigenSystem
from .mixture import MixtureModel

SCHEMA_VERSION = 1


@dataclass(frozen=True, eq=False)
class ModelDocument:
    """What a model JSON file holds.

    Either part may be absent: ``fit`` writes a model (plus the eigen-system
    when the design came from curves), ``fpca`` writes only the eigen-system.
    metadata carries fit provenance such as seed, loglik, bic and iterations.
    """

    model: MixtureModel | None = None
    eigen: EigenSystem | None = None
    metadata: dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION
