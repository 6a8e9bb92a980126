"""CSV ingestion and emission for datasets, curves and result tables.

Every file is read as strings first so that each cell can be validated and
reported with its 1-based line number (the header is line 1). Writes are
whole-file atomic, UTF-8 with LF endings, and floats use the shortest
representation that round-trips.
"""

import logging
import re
from pathlib import Path

import numpy as np
import pandas as pd

from joint_mixreg.exceptions import DataParseError, DimensionMismatchError, ValidationError
from joint_mixreg.models import CurveSample, Dataset
from joint_mixreg.utils.file_utils import atomic_write_text
from joint_mixreg.utils.sort_utils import natural_order

logger = logging.getLogger(__name__)

RESPONSE_COLUMN = "y"
TRUTH_COLUMN = "truth"
SUBJECT_COLUMN = "subject_id"
CURVE_COLUMNS = (SUBJECT_COLUMN, "t", "value")
_NUMBERED = re.compile(r"^([xz])(\d+)$")


def format_float(value: float) -> str:
    """Shortest decimal string that parses back to the same float."""
    return repr(float(value))


def _read_strings(path: Path) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except FileNotFoundError as e:
        raise DataParseError(f"File not found: {path}") from e
    except pd.errors.EmptyDataError as e:
        raise DataParseError(f"{path} is empty; a header line is required", line=1) from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataParseError(f"Cannot parse {path}: {e}") from e
    frame.columns = [str(c).strip() for c in frame.columns]
    if len(set(frame.columns)) != len(frame.columns):
        raise DataParseError(f"{path} has duplicate column names", line=1)
    return frame


def _numeric_column(frame: pd.DataFrame, column: str, path: Path) -> np.ndarray:
    """Parse one column as finite floats, naming the first bad line."""
    raw = frame[column].str.strip()
    values = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        row = int(bad[0])
        raise DataParseError(
            f"{path}: column {column!r} has non-numeric or non-finite value {raw.iloc[row]!r}",
            line=row + 2,
        )
    return values


def _label_column(frame: pd.DataFrame, column: str, path: Path) -> np.ndarray:
    values = _numeric_column(frame, column, path)
    bad = np.flatnonzero((values < 0) | (values != np.round(values)))
    if bad.size:
        raise DataParseError(
            f"{path}: {column!r} must hold non-negative integer labels", line=int(bad[0]) + 2
        )
    return values.astype(int)


def _numbered_columns(columns, prefix: str, path: Path) -> list[str]:
    """Columns named prefix1..prefixN, which must be contiguous from 1."""
    found = {}
    for column in columns:
        match = _NUMBERED.match(column)
        if match and match.group(1) == prefix:
            found[int(match.group(2))] = column
    if sorted(found) != list(range(1, len(found) + 1)):
        raise DataParseError(
            f"{path}: columns {prefix}1..{prefix}{len(found)} must be numbered contiguously",
            line=1,
        )
    return [found[j] for j in sorted(found)]


def read_dataset(
    path: Path,
    invariant_cols: list[str] | None = None,
    require_response: bool = True,
) -> Dataset:
    """Read a dataset CSV with header ``y, x1..xp, z1..zq[, truth]``.

    Args:
        path: CSV file
        invariant_cols: Covariate columns to move into Z (regression-only)
        require_response: If False, a missing ``y`` column is filled with zeros

    Raises:
        DataParseError: If the header or any value is malformed (with its line number)
    """
    path = Path(path)
    frame = _read_strings(path)
    columns = list(frame.columns)

    x_cols = _numbered_columns(columns, "x", path)
    z_cols = _numbered_columns(columns, "z", path)
    known = {RESPONSE_COLUMN, TRUTH_COLUMN, SUBJECT_COLUMN, *x_cols, *z_cols}
    unknown = [c for c in columns if c not in known]
    if unknown:
        raise DataParseError(f"{path}: unexpected column(s) {unknown}", line=1)

    invariant_cols = list(invariant_cols or [])
    for column in invariant_cols:
        if column not in columns or column in (RESPONSE_COLUMN, TRUTH_COLUMN, SUBJECT_COLUMN):
            raise ValidationError(f"Invariant column {column!r} is not a covariate of {path}")
    x_cols = [c for c in x_cols if c not in invariant_cols]
    z_cols = z_cols + [c for c in invariant_cols if c not in z_cols]

    n = len(frame)
    if RESPONSE_COLUMN in columns:
        y = _numeric_column(frame, RESPONSE_COLUMN, path)
    elif require_response:
        raise DataParseError(f"{path}: missing required column 'y'", line=1)
    else:
        y = np.zeros(n)

    X = np.column_stack([_numeric_column(frame, c, path) for c in x_cols]) if x_cols else None
    Z = np.column_stack([_numeric_column(frame, c, path) for c in z_cols]) if z_cols else None
    truth = _label_column(frame, TRUTH_COLUMN, path) if TRUTH_COLUMN in columns else None

    logger.info(f"Read {n} rows from {path} (p={len(x_cols)}, q={len(z_cols)})")
    return Dataset(
        y=y,
        X=np.zeros((n, 0)) if X is None else X,
        Z=Z,
        truth=truth,
    )


def dataset_frame(d: Dataset) -> pd.DataFrame:
    """Dataset as a frame with columns y, x1..xp, z1..zq[, truth]."""
    frame = pd.DataFrame({RESPONSE_COLUMN: d.y})
    for j in range(d.p):
        frame[f"x{j + 1}"] = d.X[:, j]
    for j in range(d.q):
        frame[f"z{j + 1}"] = d.Z[:, j]  # type: ignore[index]
    if d.truth is not None:
        frame[TRUTH_COLUMN] = d.truth
    return frame


def write_frame(path: Path, frame: pd.DataFrame) -> Path:
    """Write a frame atomically with round-trip float formatting."""
    out = frame.copy()
    for column in out.columns:
        if pd.api.types.is_float_dtype(out[column]):
            out[column] = out[column].map(
                lambda v: "" if pd.isna(v) else format_float(v)
            )
    text = out.to_csv(index=False, lineterminator="\n")
    return atomic_write_text(Path(path), text)


def write_dataset(path: Path, d: Dataset) -> Path:
    """Write a dataset CSV that read_dataset reads back exactly."""
    return write_frame(path, dataset_frame(d))


def read_curves(path: Path, domain: tuple[float, float] | None = None) -> CurveSample:
    """Read long-format curves ``subject_id, t, value``.

    Subjects are ordered naturally by id and each subject's rows by time.
    The domain defaults to [min t, max t] over all subjects.

    Raises:
        DataParseError: On a malformed header or value, or a repeated (subject, t) pair
    """
    path = Path(path)
    frame = _read_strings(path)
    missing = [c for c in CURVE_COLUMNS if c not in frame.columns]
    if missing:
        raise DataParseError(f"{path}: missing column(s) {missing}", line=1)

    ids = frame[SUBJECT_COLUMN].str.strip()
    empty = np.flatnonzero(ids.to_numpy() == "")
    if empty.size:
        raise DataParseError(f"{path}: empty subject_id", line=int(empty[0]) + 2)
    t = _numeric_column(frame, "t", path)
    v = _numeric_column(frame, "value", path)

    long = pd.DataFrame({"sid": ids.to_numpy(), "t": t, "v": v, "line": np.arange(len(frame)) + 2})
    dup = long.duplicated(subset=["sid", "t"])
    if dup.any():
        row = long[dup].iloc[0]
        raise DataParseError(f"{path}: subject {row.sid} repeats time {row.t}", line=int(row.line))

    subjects = list(dict.fromkeys(long["sid"]))
    subjects = [subjects[i] for i in natural_order(subjects)]
    groups = {sid: g.sort_values("t") for sid, g in long.groupby("sid", sort=False)}
    times = tuple(groups[s]["t"].to_numpy() for s in subjects)
    values = tuple(groups[s]["v"].to_numpy() for s in subjects)

    if domain is None:
        if not len(long):
            raise DataParseError(f"{path} has no observations", line=2)
        domain = (float(long["t"].min()), float(long["t"].max()))
    logger.info(f"Read {len(subjects)} curves ({len(long)} observations) from {path}")
    return CurveSample(subject_ids=tuple(subjects), times=times, values=values, domain=domain)


def write_curves(path: Path, curves: CurveSample) -> Path:
    """Write curves in the long format read_curves expects."""
    rows = {SUBJECT_COLUMN: [], "t": [], "value": []}
    for sid, t, v in zip(curves.subject_ids, curves.times, curves.values, strict=True):
        rows[SUBJECT_COLUMN].extend([sid] * t.size)
        rows["t"].extend(t.tolist())
        rows["value"].extend(v.tolist())
    return write_frame(path, pd.DataFrame(rows))


def read_subject_table(path: Path) -> pd.DataFrame:
    """Read per-subject columns (``subject_id`` plus numeric columns) indexed by subject id.

    Rows keep file order; numeric columns are validated like dataset columns.
    """
    path = Path(path)
    frame = _read_strings(path)
    if SUBJECT_COLUMN not in frame.columns:
        raise DataParseError(f"{path}: missing column 'subject_id'", line=1)
    ids = frame[SUBJECT_COLUMN].str.strip()
    if ids.duplicated().any():
        row = int(np.flatnonzero(ids.duplicated().to_numpy())[0])
        raise DataParseError(f"{path}: duplicate subject_id {ids.iloc[row]!r}", line=row + 2)
    out = pd.DataFrame(index=pd.Index(ids.to_numpy(), name=SUBJECT_COLUMN))
    for column in frame.columns:
        if column == SUBJECT_COLUMN:
            continue
        out[column] = _numeric_column(frame, column, path)
    return out


def align_subjects(table: pd.DataFrame, subject_ids: tuple[str, ...], path: Path) -> pd.DataFrame:
    """Reorder a subject table to the given ids.

    Raises:
        DimensionMismatchError: If the table lacks some subject or has extra ones
    """
    missing = [s for s in subject_ids if s not in table.index]
    extra = [s for s in table.index if s not in set(subject_ids)]
    if missing or extra:
        raise DimensionMismatchError(
            f"{path}: subjects do not match the curves (missing {missing[:5]}, extra {extra[:5]})"
        )
    return table.loc[list(subject_ids)]
