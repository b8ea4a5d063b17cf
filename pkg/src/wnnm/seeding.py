"""Deterministic seed derivation.

Every random stream in the package is addressed by a tuple of integers
(master seed, trial index, ...). The tuple is hashed with SplitMix64 so that
streams can be generated in any order with identical results.
"""

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def mix_seed(master: int, *keys: int) -> int:
    """Fold ``keys`` into ``master`` and return a 64-bit stream seed."""
    h = splitmix64(master & MASK64)
    for k in keys:
        h = splitmix64(h ^ (k & MASK64))
    return h


def stream(master: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(mix_seed(master, *keys)))
