"""File system utilities."""

import contextlib
import os
import tempfile
from pathlib import Path


def ensure_directory(path: Path) -> Path:
    """Ensure a directory exists, creating it if necessary.

    Args:
        path: Directory path to ensure exists

    Returns:
        The directory path
    """
    path.mkdir(parents=True, exist_ok=True)
    return path


def atomic_write_text(path: Path, text: str) -> Path:
    """Write a text file whole-file atomically (write temp, then rename).

    The temporary file lives in the destination directory so the final
    ``os.replace`` never crosses a file system boundary. Output is UTF-8
    with LF line endings regardless of platform.

    Args:
        path: Destination file
        text: Full file contents

    Returns:
        The destination path
    """
    path = Path(path)
    directory = ensure_directory(path.parent if str(path.parent) else Path("."))

    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp_name)
        raise
    return path


def derived_path(path: Path, suffix: str) -> Path:
    """Build a sibling path such as ``model.bic.csv`` from ``model.json``.

    Args:
        path: Base output path
        suffix: New suffix including the leading dot(s), e.g. ".bic.csv"

    Returns:
        Path next to ``path`` with its suffix replaced
    """
    return path.with_name(path.stem + suffix)
