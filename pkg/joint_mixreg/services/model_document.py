"""JSON (de)serialization of models and eigen-systems.

Floats are stored as shortest round-trip decimal strings, so
parse(serialize(doc)) reproduces every finite value bit for bit.
Covariances are stored as their row-major lower triangle.
"""

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from joint_mixreg.exceptions import DataParseError, JointMixregException
from joint_mixreg.models import (
    SCHEMA_VERSION,
    Component,
    EigenSystem,
    MixtureModel,
    ModelDocument,
    ModelKind,
)
from joint_mixreg.utils.file_utils import atomic_write_text

from .dataset_io import format_float

logger = logging.getLogger(__name__)


def _encode(values) -> Any:
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        return format_float(arr)
    return [_encode(v) for v in arr]


def _decode(values, name: str) -> np.ndarray:
    try:
        return np.array(_decode_nested(values), dtype=float)
    except (TypeError, ValueError) as e:
        raise DataParseError(f"Field {name!r} is not a numeric array: {e}") from e


def _decode_nested(values):
    if isinstance(values, list):
        return [_decode_nested(v) for v in values]
    if isinstance(values, str | int | float) and not isinstance(values, bool):
        return float(values)
    raise TypeError(f"unexpected value {values!r}")


def _lower_triangle(matrix: np.ndarray) -> list[str]:
    rows, cols = np.tril_indices(matrix.shape[0])
    return _encode(matrix[rows, cols])


def _from_lower_triangle(values, p: int, name: str) -> np.ndarray:
    flat = _decode(values, name)
    if flat.shape != (p * (p + 1) // 2,):
        raise DataParseError(f"Field {name!r} must hold {p * (p + 1) // 2} values")
    matrix = np.zeros((p, p))
    rows, cols = np.tril_indices(p)
    matrix[rows, cols] = flat
    matrix[cols, rows] = flat
    return matrix


def _component_to_dict(c: Component) -> dict:
    entry: dict[str, Any] = {
        "alpha": None,
        "zeta": None,
        "beta": None,
        "sigma2": None,
        "mu": None,
        "Sigma": None,
    }
    if c.has_regression:
        entry.update(
            alpha=format_float(c.alpha),  # type: ignore[arg-type]
            zeta=_encode(c.zeta),
            beta=_encode(c.beta),
            sigma2=format_float(c.sigma2),  # type: ignore[arg-type]
        )
    if c.has_covariate_law:
        entry.update(mu=_encode(c.mu), Sigma=_lower_triangle(c.cov))  # type: ignore[arg-type]
    return entry


def _component_from_dict(entry: dict, p: int, index: int) -> Component:
    fields: dict[str, Any] = {}
    if entry.get("alpha") is not None:
        fields.update(
            alpha=float(_decode(entry["alpha"], f"components[{index}].alpha")),
            zeta=_decode(entry.get("zeta") or [], f"components[{index}].zeta"),
            beta=_decode(entry.get("beta"), f"components[{index}].beta"),
            sigma2=float(_decode(entry.get("sigma2"), f"components[{index}].sigma2")),
        )
    if entry.get("mu") is not None:
        fields.update(
            mu=_decode(entry["mu"], f"components[{index}].mu"),
            cov=_from_lower_triangle(entry.get("Sigma"), p, f"components[{index}].Sigma"),
        )
    return Component(**fields)


def _eigen_to_dict(e: EigenSystem) -> dict:
    return {
        "grid": _encode(e.grid),
        "weights": _encode(e.weights),
        "mean": _encode(e.mean),
        "eigenvalues": _encode(e.eigenvalues),
        "eigenfunctions": _encode(e.eigenfunctions),
        "cumulative_variance": _encode(e.cumulative_variance),
    }


def _eigen_from_dict(block: dict) -> EigenSystem:
    fields = {
        name: _decode(block.get(name), f"eigen.{name}")
        for name in ("grid", "weights", "mean", "eigenvalues", "cumulative_variance")
    }
    functions = _decode(block.get("eigenfunctions"), "eigen.eigenfunctions")
    if functions.ndim == 1:
        functions = functions.reshape(0, fields["grid"].size)
    return EigenSystem(eigenfunctions=functions, **fields)


def _metadata_to_dict(metadata: dict) -> dict:
    out = {}
    for key, value in metadata.items():
        if isinstance(value, float | np.floating):
            out[key] = format_float(value)
        elif isinstance(value, np.integer):
            out[key] = int(value)
        else:
            out[key] = value
    return out


def to_dict(doc: ModelDocument) -> dict:
    """Plain JSON-ready mapping for a document."""
    out: dict[str, Any] = {"schema_version": doc.schema_version}
    if doc.model is not None:
        m = doc.model
        out.update(
            kind=m.kind.value,
            K=m.K,
            p=m.p,
            q=m.q,
            pi=_encode(m.pi),
            components=[_component_to_dict(c) for c in m.components],
        )
    out["eigen"] = None if doc.eigen is None else _eigen_to_dict(doc.eigen)
    out["metadata"] = _metadata_to_dict(doc.metadata)
    return out


def from_dict(raw: dict) -> ModelDocument:
    """Rebuild a document from its mapping.

    Raises:
        DataParseError: If the mapping is malformed or violates a model invariant
    """
    if not isinstance(raw, dict):
        raise DataParseError("Model document must be a JSON object")
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DataParseError(f"Unsupported schema_version {version!r}; expected {SCHEMA_VERSION}")
    try:
        model = None
        if raw.get("components") is not None:
            kind = ModelKind.parse(raw.get("kind", ""))
            p = int(raw["p"])
            components = tuple(
                _component_from_dict(entry, p, k) for k, entry in enumerate(raw["components"])
            )
            model = MixtureModel(pi=_decode(raw["pi"], "pi"), components=components, kind=kind)
            if model.K != int(raw["K"]) or model.q != int(raw.get("q", 0)):
                raise DataParseError("K or q disagrees with the stored components")
        eigen = None if raw.get("eigen") is None else _eigen_from_dict(raw["eigen"])
    except DataParseError:
        raise
    except (KeyError, TypeError, ValueError, JointMixregException) as e:
        raise DataParseError(f"Invalid model document: {e}") from e
    return ModelDocument(model=model, eigen=eigen, metadata=dict(raw.get("metadata") or {}))


def serialize(doc: ModelDocument) -> str:
    """JSON text for a document (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(to_dict(doc), indent=2, sort_keys=True) + "\n"


def parse(text: str) -> ModelDocument:
    """Inverse of serialize."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DataParseError(f"Invalid JSON: {e.msg}", line=e.lineno) from e
    return from_dict(raw)


def save_document(path: Path, doc: ModelDocument) -> Path:
    """Write a document atomically."""
    logger.debug(f"Writing model document to {path}")
    return atomic_write_text(Path(path), serialize(doc))


def load_document(path: Path) -> ModelDocument:
    """Read a document written by save_document."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise DataParseError(f"Model file not found: {path}") from e
    return parse(text)
