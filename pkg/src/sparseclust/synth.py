"""Synthetic hierarchies and similarity matrices that satisfy tight clustering.

The similarity model is this module's own design choice (the recovery
guarantees only assume the tight-clustering condition, not any particular
generative model): each internal node gets a level value that strictly
increases along every root-to-leaf path, a pair's similarity is the level of
its lowest common ancestor, and an optional jitter smaller than half the
minimum level gap breaks ties without ever reordering comparable pairs.  Any
matrix built this way satisfies the tight-clustering condition by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import derive_seed, pair_uniforms, uniform_stream
from .tree import ClusterTree

TREE_KINDS = ("balanced", "random_unbalanced", "caterpillar")

_ROLE_TREE = 0x7452EE
_ROLE_LEVELS = 0x7E5E15
_ROLE_JITTER = 0x7177E2

# levels are rescaled into this range before jitter is applied
_LEVEL_LO = 0.2
_LEVEL_HI = 1.0


@dataclass(frozen=True)
class TreeShape:
    """Recipe for a random ground-truth hierarchy."""

    kind: str
    n_items: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in TREE_KINDS:
            raise ValueError(f"kind must be one of {TREE_KINDS}, got {self.kind!r}")
        if self.n_items < 2:
            raise ValueError("n_items must be >= 2")
        if self.kind == "balanced" and self.n_items & (self.n_items - 1):
            raise ValueError("balanced trees require n_items to be a power of two")


def generate_tree(shape: TreeShape) -> ClusterTree:
    """Deterministically build the hierarchy described by ``shape``.

    balanced: recursive exact halves.  caterpillar: splits one item off at
    every level (the worst case for the number of small clusters).
    random_unbalanced: left-child size drawn uniformly from [1, size-1].
    """
    n = shape.n_items
    if shape.kind == "random_unbalanced":
        draws = iter(uniform_stream(derive_seed(shape.seed, _ROLE_TREE), n - 1))

        def left_size(size: int) -> int:
            return 1 + int(next(draws) * (size - 1))

    elif shape.kind == "balanced":

        def left_size(size: int) -> int:
            return size // 2

    else:  # caterpillar

        def left_size(size: int) -> int:
            return size - 1

    # iterative post-order assembly over contiguous item ranges; split sizes
    # are drawn in pre-order so the stream is consumed deterministically
    children: list[tuple[int, int]] = []
    done: dict[tuple[int, int], int] = {}
    splits: dict[tuple[int, int], int] = {}
    stack: list[tuple[int, int, bool]] = [(0, n, False)]
    while stack:
        lo, hi, expanded = stack.pop()
        if hi - lo == 1:
            done[(lo, hi)] = lo
            continue
        if not expanded:
            k = left_size(hi - lo)
            splits[(lo, hi)] = k
            stack.append((lo, hi, True))
            stack.append((lo + k, hi, False))
            stack.append((lo, lo + k, False))
        else:
            k = splits.pop((lo, hi))
            a = done.pop((lo, lo + k))
            b = done.pop((lo + k, hi))
            children.append((a, b))
            done[(lo, hi)] = n + len(children) - 1
    return ClusterTree(n, np.array(children, dtype=np.int64))


def assign_levels(tree: ClusterTree, seed: int) -> np.ndarray:
    """Random per-node level values, strictly increasing away from the root.

    Returns an array indexed by node id; leaf entries are NaN (leaves carry
    no level).  Each internal node adds an increment drawn uniformly from
    [0.2, 1.0) to its parent's level, keyed by node id so the result does not
    depend on traversal order; levels are then rescaled into
    [0.2, 1.0] root-to-deepest.
    """
    n = tree.n_leaves
    levels = np.full(tree.n_nodes, np.nan)
    increments = _LEVEL_LO + 0.8 * uniform_stream(
        derive_seed(seed, _ROLE_LEVELS), tree.n_nodes
    )
    for node in range(tree.n_nodes - 1, n - 1, -1):
        parent = tree.parent(node)
        base = 0.0 if parent == -1 else levels[parent]
        levels[node] = base + increments[node]
    internal = levels[n:]
    lo, hi = internal.min(), internal.max()
    if hi > lo:
        levels[n:] = _LEVEL_LO + (_LEVEL_HI - _LEVEL_LO) * (internal - lo) / (hi - lo)
    else:  # single internal node
        levels[n:] = _LEVEL_HI
    return levels


def similarities_from_levels(
    tree: ClusterTree, levels: np.ndarray, seed: int = 0, jitter: float = 0.0
) -> np.ndarray:
    """Similarity matrix with s(i,j) = level(lca(i,j)) plus bounded jitter.

    ``levels`` must strictly increase from parent to child on every internal
    edge.  The jitter added to each pair is ``jitter * u(i,j) * g`` with
    u(i,j) a per-pair uniform and g strictly below half the smallest level
    gap of this instance, which preserves tight clustering while making
    ties between comparable pairs almost surely impossible.
    """
    if not 0.0 <= jitter < 1.0:
        raise ValueError("jitter must be in [0, 1)")
    levels = np.asarray(levels, dtype=np.float64)
    if levels.shape != (tree.n_nodes,):
        raise ValueError(f"levels must have one entry per node ({tree.n_nodes})")
    n = tree.n_leaves

    gaps = []
    for node in range(n, tree.n_nodes):
        if levels[node] <= 0:
            raise ValueError("internal levels must be strictly positive")
        parent = tree.parent(node)
        if parent != -1:
            gap = levels[node] - levels[parent]
            if gap <= 0:
                raise ValueError(
                    f"level of node {node} must exceed its parent's level"
                )
            gaps.append(gap)

    sim = np.zeros((n, n))
    for node in range(n, tree.n_nodes):
        a, b = tree.children[node - n]
        block = np.ix_(tree.leaf_items(a), tree.leaf_items(b))
        sim[block] = levels[node]
        sim[block[1], block[0]] = levels[node]

    if jitter > 0.0:
        # no internal edge exists only for N=2, where any bound is safe
        gap_min = min(gaps) if gaps else float(levels[tree.root])
        scale = jitter * 0.499 * gap_min
        sim += scale * pair_uniforms(n, derive_seed(seed, _ROLE_JITTER))
        np.fill_diagonal(sim, 0.0)
    return sim


def generate_tc_similarities(
    tree: ClusterTree, seed: int, jitter: float = 0.5
) -> np.ndarray:
    """Random similarity matrix for ``tree`` satisfying tight clustering."""
    return similarities_from_levels(tree, assign_levels(tree, seed), seed, jitter)
