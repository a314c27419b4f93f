"""
Per-query random streams.

Every sampled artifact draws from a generator derived from the master seed
and a stable key (triple index, direction, run), never from a shared stream,
so results do not depend on scheduling or worker count.
"""
import numpy as np


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    if seed < 0 or any(k < 0 for k in key):
        raise ValueError(f"seed and key must be non-negative, got {seed} / {key}")
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))
