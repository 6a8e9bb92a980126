"""Derived random seeds for independent, reproducible jobs."""

import numpy as np


def derive_seed(seed: int, *path: int) -> int:
    """Derive a child seed from a root seed and a job path.

    Identical (seed, path) pairs always give the same child seed and
    distinct paths give statistically independent streams, whatever order
    the jobs execute in.

    Args:
        seed: Root seed
        *path: Job coordinates, e.g. (restart_index,) or (scenario, n, replicate)

    Returns:
        Non-negative 63-bit integer seed
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(p) & 0xFFFFFFFFFFFFFFFF for p in path]
    state = np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))


def make_rng(seed: int, *path: int) -> np.random.Generator:
    """Build a numpy Generator for the derived seed."""
    return np.random.default_rng(derive_seed(seed, *path))
