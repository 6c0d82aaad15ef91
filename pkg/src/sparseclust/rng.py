"""Deterministic, order-independent random numbers.

Everything random in this package is derived from a 64-bit seed through the
splitmix64 mixing function.  Per-pair values are keyed by (seed, i, j) with
i < j, so a similarity matrix or observation mask is a pure function of its
seed: generation order, chunking, and parallelism cannot change the output.
"""

from __future__ import annotations

import numpy as np

_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix64(x: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer over a uint64 array (vectorized, wrapping)."""
    with np.errstate(over="ignore"):
        x = (x + _GAMMA) & _MASK64
        x = ((x ^ (x >> np.uint64(30))) * _MIX1) & _MASK64
        x = ((x ^ (x >> np.uint64(27))) * _MIX2) & _MASK64
        return x ^ (x >> np.uint64(31))


def derive_seed(seed: int, *tags: int) -> int:
    """Derive an independent sub-seed from ``seed`` and integer role tags."""
    state = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    for tag in tags:
        state = _mix64(state ^ _mix64(np.uint64(tag & 0xFFFFFFFFFFFFFFFF)))
    return int(state)


def uniform_stream(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """``count`` uniforms in [0, 1) at positions offset..offset+count-1.

    Position k of the stream depends only on (seed, k).
    """
    idx = np.arange(offset, offset + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        keyed = (np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _GAMMA) & _MASK64
    bits = _mix64(keyed)
    # top 53 bits give exact doubles strictly inside [0, 1)
    return (bits >> np.uint64(11)).astype(np.float64) / float(1 << 53)


def pair_uniforms(n: int, seed: int) -> np.ndarray:
    """Symmetric (n, n) matrix of per-pair uniforms in [0, 1).

    Entry (i, j) is keyed by (seed, min(i,j), max(i,j)); the diagonal is 0.
    """
    iu, ju = np.triu_indices(n, k=1)
    keys = iu.astype(np.uint64) * np.uint64(n) + ju.astype(np.uint64)
    with np.errstate(over="ignore"):
        keyed = (np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + keys * _GAMMA) & _MASK64
    vals = (_mix64(keyed) >> np.uint64(11)).astype(np.float64) / float(1 << 53)
    out = np.zeros((n, n), dtype=np.float64)
    out[iu, ju] = vals
    out[ju, iu] = vals
    return out


def seed_to_int(x: float) -> int:
    """Stable 64-bit key for a float (for seeding by a probability value)."""
    return int(np.float64(x).view(np.uint64))
