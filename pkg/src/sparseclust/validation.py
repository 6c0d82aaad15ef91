"""Input validation helpers shared by the library and the estimator."""

from __future__ import annotations

import numpy as np

# generators keep all similarities at or above this floor so that 0 is an
# unambiguous "unobserved" sentinel
MIN_SIMILARITY = 1e-6


def check_similarity_matrix(sim) -> np.ndarray:
    """Validate and return a dense similarity matrix as float64.

    Requires a square symmetric matrix with strictly positive off-diagonal
    entries (the zero-fill step reserves 0 for unobserved pairs).  The
    diagonal is ignored and never read.
    """
    sim = np.asarray(sim, dtype=np.float64)
    if sim.ndim != 2 or sim.shape[0] != sim.shape[1]:
        raise ValueError(f"similarity matrix must be square, got shape {sim.shape}")
    if not np.array_equal(sim, sim.T):
        raise ValueError("similarity matrix must be symmetric")
    off_diag = ~np.eye(sim.shape[0], dtype=bool)
    if not (sim[off_diag] > 0).all():
        raise ValueError(
            "off-diagonal similarities must be strictly positive "
            "(0 is reserved for unobserved pairs)"
        )
    return sim


def check_observation_mask(mask, n: int | None = None) -> np.ndarray:
    """Validate and return a boolean observation mask.

    Must be square, symmetric and, when ``n`` is given, of matching size.
    The diagonal is ignored.
    """
    mask = np.asarray(mask)
    if mask.dtype != bool:
        raise ValueError("observation mask must be boolean")
    if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
        raise ValueError(f"observation mask must be square, got shape {mask.shape}")
    if n is not None and mask.shape[0] != n:
        raise ValueError(f"observation mask is {mask.shape[0]}x{mask.shape[0]}, expected {n}x{n}")
    if not np.array_equal(mask, mask.T):
        raise ValueError("observation mask must be symmetric")
    return mask
