"""Bernoulli observation masks and connectivity of the induced pair graph.

Observing the similarity of a pair of items is an edge in the sampling
graph; whether a group of items survives clustering from partial data is a
question about connectivity of its induced subgraph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import derive_seed, pair_uniforms
from .tree import ClusterTree
from .validation import check_observation_mask

_ROLE_MASK = 0x3A5C


def sample_mask(n: int, p: float, seed: int) -> np.ndarray:
    """Symmetric boolean mask observing each unordered pair with probability p.

    Pairs i < j are sampled independently (keyed by seed and pair), then
    mirrored; the diagonal is never observed.  For a fixed seed the observed
    set grows monotonically with p, which the experiment harness exploits for
    common random numbers.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    u = pair_uniforms(n, derive_seed(seed, _ROLE_MASK))
    mask = u < p
    np.fill_diagonal(mask, False)
    return mask


@dataclass(eq=False)
class SamplingGraph:
    """Undirected graph with an edge per observed off-diagonal pair."""

    n: int
    edges: np.ndarray  # (m, 2) int array, each row i < j

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def adjacency_mask(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=bool)
        if len(self.edges):
            out[self.edges[:, 0], self.edges[:, 1]] = True
            out[self.edges[:, 1], self.edges[:, 0]] = True
        return out


def build_graph(mask: np.ndarray) -> SamplingGraph:
    """Sampling graph of an observation mask (upper-triangle support)."""
    mask = check_observation_mask(mask)
    edges = np.argwhere(np.triu(mask, k=1)).astype(np.int64)
    return SamplingGraph(n=mask.shape[0], edges=edges)


class DisjointSetForest:
    """Union-find with path compression and union by rank."""

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.rank = np.zeros(n, dtype=np.int64)

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return int(root)

    def union(self, x: int, y: int) -> bool:
        """Merge the sets of x and y; returns False if already joined."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return True


def is_connected(graph: SamplingGraph, subset) -> bool:
    """True iff the subgraph induced on ``subset`` is connected.

    Singletons count as connected.  Only edges with both endpoints in the
    subset are considered.
    """
    items = np.unique(np.asarray(list(subset), dtype=np.int64))
    if len(items) == 0:
        raise ValueError("subset must be non-empty")
    if items[0] < 0 or items[-1] >= graph.n:
        raise ValueError("subset contains items outside the graph")
    if len(items) == 1:
        return True
    member = np.zeros(graph.n, dtype=bool)
    member[items] = True
    edges = graph.edges
    if len(edges):
        keep = member[edges[:, 0]] & member[edges[:, 1]]
        edges = edges[keep]
    dsf = DisjointSetForest(graph.n)
    joins = 0
    for a, b in edges:
        if dsf.union(int(a), int(b)):
            joins += 1
            if joins == len(items) - 1:
                return True
    root = dsf.find(int(items[0]))
    return all(dsf.find(int(i)) == root for i in items[1:])


def connectivity_report(
    tree: ClusterTree, graph: SamplingGraph, n_min: int = 1
) -> dict[frozenset, bool]:
    """Induced-subgraph connectivity of every tree cluster of size >= n_min.

    This is the exact oracle for which clusters zero-filled agglomerative
    clustering can recover from the observed pairs.
    """
    if tree.n_leaves != graph.n:
        raise ValueError("tree and graph sizes differ")
    report = {}
    for node in range(tree.n_nodes):
        if tree.size(node) >= n_min:
            report[tree.leaf_set(node)] = is_connected(graph, tree.leaf_items(node))
    return report
