"""Sorting utilities, especially for natural ordering of subject ids."""

import re
from typing import Any


def natural_sort_key(text: str) -> list[Any]:
    """Generate a natural sort key for a subject id.

    Digit runs compare numerically, so ``boy2`` sorts before ``boy10``.

    Args:
        text: Subject id to generate a sort key for

    Returns:
        List of strings and integers for sorting

    Example:
        ids = ["girl10", "boy2", "girl1"]
        sorted(ids, key=natural_sort_key)
        # Returns: ["boy2", "girl1", "girl10"]
    """

    def convert(segment):
        return int(segment) if segment.isdigit() else segment.lower()

    return [convert(c) for c in re.split(r"(\d+)", str(text))]


def natural_order(ids: list[str]) -> list[int]:
    """Return the index permutation that sorts ``ids`` naturally (stable)."""
    return sorted(range(len(ids)), key=lambda i: natural_sort_key(ids[i]))
