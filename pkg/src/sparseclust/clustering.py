"""Single-linkage agglomerative clustering over partially observed similarities.

Unobserved pairs are zero-filled and the usual agglomerative loop runs on
top: repeatedly merge the two clusters with the largest current similarity,
combining rows by entrywise maximum.  One deviation from the textbook loop:
when the largest remaining inter-cluster similarity is 0 (i.e. nothing
observed connects the remaining clusters), merging would be arbitrary, so
the loop halts and returns a forest with ``forced_halt`` set.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .tree import ClusterTree
from .validation import check_observation_mask, check_similarity_matrix


@dataclass(eq=False)
class MergeForest:
    """Result of an agglomerative run: a forest of merge trees.

    Node ids follow the same convention as :class:`ClusterTree`: leaves are
    0..N-1 and merge step t creates node N+t from ``children[t]`` at
    similarity ``values[t]``.  ``roots`` are the clusters left standing;
    there is exactly one unless the run halted on unobserved data.
    """

    n_leaves: int
    children: np.ndarray  # (n_merges, 2) int
    values: np.ndarray  # (n_merges,) float, non-increasing
    roots: tuple[int, ...]
    forced_halt: bool
    _leaf_items: list[np.ndarray] | None = field(default=None, repr=False)

    @property
    def n_merges(self) -> int:
        return len(self.values)

    @property
    def n_nodes(self) -> int:
        return self.n_leaves + self.n_merges

    @property
    def merges(self) -> list[tuple[int, int, float]]:
        """Merge records as (node_a, node_b, similarity) in merge order."""
        return [
            (int(a), int(b), float(v))
            for (a, b), v in zip(self.children, self.values)
        ]

    def leaf_items(self, node: int) -> np.ndarray:
        if self._leaf_items is None:
            cache = [np.array([i], dtype=np.int64) for i in range(self.n_leaves)]
            for a, b in self.children:
                cache.append(np.concatenate([cache[a], cache[b]]))
            self._leaf_items = cache
        return self._leaf_items[node]

    def leaf_set(self, node: int) -> frozenset:
        return frozenset(self.leaf_items(node).tolist())

    def cluster_sets(self, n_min: int = 1) -> set[frozenset]:
        """Leaf sets of every node of the forest with at least n_min items."""
        return {
            self.leaf_set(v)
            for v in range(self.n_nodes)
            if len(self.leaf_items(v)) >= n_min
        }


@dataclass(frozen=True)
class RecoveryReport:
    """Which ground-truth clusters of size >= n_min an estimate reproduced."""

    n_min: int
    total_clusters: int
    recovered: int
    per_cluster: dict
    fully_recovered: bool


def incomplete_agglomerative(
    sim: np.ndarray, mask: np.ndarray, method: str = "scan"
) -> MergeForest:
    """Cluster from the observed entries of a similarity matrix.

    ``sim`` must be symmetric with strictly positive off-diagonal values,
    ``mask`` marks the observed pairs.  Ties at the maximum are broken
    toward the lexicographically smallest (row, column) pair, so the result
    is deterministic.  ``method`` selects the full-matrix argmax scan
    ("scan") or the lazy max-heap ("heap"); both produce identical forests.
    """
    sim = check_similarity_matrix(sim)
    mask = check_observation_mask(mask, sim.shape[0])
    work = np.where(mask, sim, 0.0)
    np.fill_diagonal(work, 0.0)
    work = np.ascontiguousarray(work)
    if method == "scan":
        children, values, roots, forced = _merge_scan(work)
    elif method == "heap":
        children, values, roots, forced = _merge_heap(work)
    else:
        raise ValueError(f"unknown method {method!r}")
    return MergeForest(
        n_leaves=sim.shape[0],
        children=np.array(children, dtype=np.int64).reshape(-1, 2),
        values=np.array(values, dtype=np.float64),
        roots=roots,
        forced_halt=forced,
    )


def _merge_scan(work: np.ndarray):
    """Vectorized argmax scan over the whole (symmetric) working matrix.

    For a symmetric matrix, numpy's row-major argmax lands on the (i, j),
    i < j copy of the best pair first, which is exactly the tie rule.
    """
    n = work.shape[0]
    reps = np.arange(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    children: list[tuple[int, int]] = []
    values: list[float] = []
    for _ in range(n - 1):
        a, b = divmod(int(work.argmax()), n)
        value = float(work[a, b])
        if value <= 0.0:
            break
        row = np.maximum(work[a], work[b])
        row[a] = row[b] = 0.0
        work[a] = row
        work[:, a] = row
        work[b] = 0.0
        work[:, b] = 0.0
        children.append((int(reps[a]), int(reps[b])))
        values.append(value)
        reps[a] = n + len(children) - 1
        active[b] = False
    roots = tuple(int(reps[i]) for i in np.flatnonzero(active))
    return children, values, roots, len(roots) > 1


def _merge_heap(work: np.ndarray):
    """Lazy max-heap over candidate pairs; stale entries are dropped on pop.

    Combined rows only ever grow, so an out-of-date entry either refers to a
    dead row or carries a value below the current one; the pop-time check
    against the working matrix rejects both.
    """
    n = work.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    observed = work[iu, ju] > 0.0
    heap = [
        (-work[i, j], int(i), int(j))
        for i, j in zip(iu[observed], ju[observed])
    ]
    heapq.heapify(heap)
    reps = np.arange(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    children: list[tuple[int, int]] = []
    values: list[float] = []
    while heap and len(children) < n - 1:
        neg, a, b = heapq.heappop(heap)
        if not (active[a] and active[b]) or work[a, b] != -neg:
            continue
        value = -neg
        old_row = work[a].copy()
        row = np.maximum(work[a], work[b])
        row[a] = row[b] = 0.0
        work[a] = row
        work[:, a] = row
        work[b] = 0.0
        work[:, b] = 0.0
        for k in np.flatnonzero(row > old_row):
            k = int(k)
            heapq.heappush(heap, (-row[k], min(a, k), max(a, k)))
        children.append((int(reps[a]), int(reps[b])))
        values.append(value)
        reps[a] = n + len(children) - 1
        active[b] = False
    roots = tuple(int(reps[i]) for i in np.flatnonzero(active))
    return children, values, roots, len(roots) > 1


def evaluate_recovery(
    truth: ClusterTree, result: MergeForest, n_min: int = 1
) -> RecoveryReport:
    """Compare a merge forest against the ground-truth hierarchy.

    A true cluster of size >= n_min counts as recovered iff some node of the
    forest has exactly that leaf set.  Because clusters nest, exact matching
    of all sufficiently large clusters pins down the pruned hierarchy as a
    whole.
    """
    if truth.n_leaves != result.n_leaves:
        raise ValueError("truth and result have different item counts")
    found = result.cluster_sets()
    per_cluster = {
        cluster: cluster in found for cluster in truth.cluster_set(n_min)
    }
    recovered = sum(per_cluster.values())
    return RecoveryReport(
        n_min=n_min,
        total_clusters=len(per_cluster),
        recovered=recovered,
        per_cluster=per_cluster,
        fully_recovered=recovered == len(per_cluster),
    )
