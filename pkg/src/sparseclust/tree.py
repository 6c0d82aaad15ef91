"""Binary merge trees over item sets, and structural queries on them.

A hierarchy over N items is stored scipy-style: nodes 0..N-1 are the leaves
(node id == item id), internal node N+t is created by row t of ``children``,
and every internal node has exactly two children with smaller ids.  The root
is node 2N-2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PrunedNode:
    """Node of a size-pruned hierarchy.

    ``items`` is the full leaf set covered by the node; a node with no
    children is a leaf-cluster.  Sub-threshold side branches are kept as
    (undersized) leaf-clusters so that the leaf-clusters of a pruned tree
    always partition the item set.
    """

    items: frozenset
    children: tuple

    @property
    def is_leaf_cluster(self) -> bool:
        return not self.children

    def leaf_clusters(self) -> list[frozenset]:
        out = []
        stack = [self]
        while stack:
            node = stack.pop()
            if node.is_leaf_cluster:
                out.append(node.items)
            else:
                stack.extend(reversed(node.children))
        return out


@dataclass(frozen=True)
class TcCheck:
    """Verdict of a tight-clustering check, with one witness on failure.

    ``witness`` is a triple (i, j, k) where i and j share a cluster that
    excludes k, yet s(i,j) <= max(s(i,k), s(j,k)).
    """

    ok: bool
    witness: tuple[int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


class ClusterTree:
    """Full binary hierarchy over ``n_leaves`` items."""

    def __init__(self, n_leaves: int, children: np.ndarray):
        children = np.asarray(children, dtype=np.int64).reshape(-1, 2)
        if n_leaves < 1:
            raise ValueError("n_leaves must be >= 1")
        if children.shape[0] != n_leaves - 1:
            raise ValueError(
                f"expected {n_leaves - 1} internal nodes, got {children.shape[0]}"
            )
        self.n_leaves = int(n_leaves)
        self.children = children
        self._validate()
        self._parent = self._build_parents()
        self._size = self._build_sizes()
        self._depth = self._build_depths()
        self._leaf_items_cache: list[np.ndarray] | None = None

    # -- structure ---------------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return 2 * self.n_leaves - 1

    @property
    def root(self) -> int:
        return self.n_nodes - 1

    def is_leaf(self, node: int) -> bool:
        return node < self.n_leaves

    def size(self, node: int) -> int:
        return int(self._size[node])

    def parent(self, node: int) -> int:
        """Parent node id, or -1 for the root."""
        return int(self._parent[node])

    def depth(self, node: int) -> int:
        return int(self._depth[node])

    def _validate(self) -> None:
        n = self.n_leaves
        seen = np.zeros(self.n_nodes, dtype=bool)
        for t, (a, b) in enumerate(self.children):
            node = n + t
            for c in (a, b):
                if not 0 <= c < node:
                    raise ValueError(f"node {node}: child {c} out of range")
                if seen[c]:
                    raise ValueError(f"node {c} has two parents")
                seen[c] = True
        if n > 1 and not seen[: self.n_nodes - 1].all():
            orphan = int(np.flatnonzero(~seen[: self.n_nodes - 1])[0])
            raise ValueError(f"node {orphan} is not attached to the tree")

    def _build_parents(self) -> np.ndarray:
        parent = np.full(self.n_nodes, -1, dtype=np.int64)
        for t, (a, b) in enumerate(self.children):
            parent[a] = parent[b] = self.n_leaves + t
        return parent

    def _build_sizes(self) -> np.ndarray:
        size = np.ones(self.n_nodes, dtype=np.int64)
        for t, (a, b) in enumerate(self.children):
            size[self.n_leaves + t] = size[a] + size[b]
        if size[self.root] != self.n_leaves:
            raise ValueError("children do not cover all leaves")
        return size

    def _build_depths(self) -> np.ndarray:
        depth = np.zeros(self.n_nodes, dtype=np.int64)
        for node in range(self.n_nodes - 2, -1, -1):
            depth[node] = depth[self._parent[node]] + 1
        return depth

    # -- leaf sets ----------------------------------------------------------

    def leaf_items(self, node: int) -> np.ndarray:
        """Item ids under ``node`` as an int array (cached, do not mutate)."""
        if self._leaf_items_cache is None:
            cache: list[np.ndarray] = [
                np.array([i], dtype=np.int64) for i in range(self.n_leaves)
            ]
            for t, (a, b) in enumerate(self.children):
                cache.append(np.concatenate([cache[a], cache[b]]))
            self._leaf_items_cache = cache
        return self._leaf_items_cache[node]

    def leaf_set(self, node: int) -> frozenset:
        return frozenset(self.leaf_items(node).tolist())

    def cluster_set(self, n_min: int = 1) -> set[frozenset]:
        """Leaf sets of every node of size >= ``n_min``."""
        return {
            self.leaf_set(v) for v in range(self.n_nodes) if self._size[v] >= n_min
        }

    # -- queries -------------------------------------------------------------

    def lca(self, i: int, j: int) -> int:
        """Deepest node whose leaf set contains both items i and j."""
        if i == j:
            raise ValueError("lca requires two distinct items")
        if not (0 <= i < self.n_leaves and 0 <= j < self.n_leaves):
            raise ValueError("item id out of range")
        a, b = i, j
        while self._depth[a] > self._depth[b]:
            a = self._parent[a]
        while self._depth[b] > self._depth[a]:
            b = self._parent[b]
        while a != b:
            a = self._parent[a]
            b = self._parent[b]
        return int(a)

    def prune_to_size(self, n_min: int) -> PrunedNode:
        """Collapse the hierarchy to clusters of at least ``n_min`` items.

        Retained nodes (size >= n_min) keep their structure; a retained node
        none of whose children are retained becomes a leaf-cluster holding its
        full leaf set.  A non-retained child of a retained node is kept as an
        undersized leaf-cluster, so the leaf-clusters partition the items.
        """
        if not 1 <= n_min <= self.n_leaves:
            raise ValueError("n_min must be in [1, n_leaves]")
        retained = self._size >= n_min
        pruned: dict[int, PrunedNode] = {}
        for node in range(self.n_nodes):
            if not retained[node]:
                continue
            if self.is_leaf(node):
                pruned[node] = PrunedNode(self.leaf_set(node), ())
                continue
            a, b = self.children[node - self.n_leaves]
            if not retained[a] and not retained[b]:
                pruned[node] = PrunedNode(self.leaf_set(node), ())
            else:
                kids = tuple(
                    pruned[c] if retained[c] else PrunedNode(self.leaf_set(c), ())
                    for c in (a, b)
                )
                pruned[node] = PrunedNode(self.leaf_set(node), kids)
        return pruned[self.root]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ClusterTree)
            and self.n_leaves == other.n_leaves
            and np.array_equal(self.children, other.children)
        )

    def __repr__(self) -> str:
        return f"ClusterTree(n_leaves={self.n_leaves})"


def _check_dims(tree: ClusterTree, sim: np.ndarray) -> np.ndarray:
    sim = np.asarray(sim, dtype=np.float64)
    if sim.shape != (tree.n_leaves, tree.n_leaves):
        raise ValueError(
            f"similarity matrix shape {sim.shape} does not match "
            f"{tree.n_leaves} items"
        )
    return sim


def check_tc(tree: ClusterTree, sim: np.ndarray) -> TcCheck:
    """Check the tight-clustering condition of ``sim`` against ``tree``.

    The condition requires, for every cluster C of the tree, every
    intra-cluster similarity to strictly exceed every similarity from a
    member of C to an item outside C.  Equivalently (and this is what is
    checked, in O(N^2)): walking any leaf's ancestor path rootward, the
    similarities from that leaf to the leaves introduced at each ancestor
    strictly decrease from one ancestor to the next.
    """
    sim = _check_dims(tree, sim)
    n = tree.n_leaves
    for i in range(n):
        prev = i
        node = tree.parent(i)
        running_min = np.inf
        running_arg = -1
        while node != -1:
            a, b = tree.children[node - n]
            other = tree.leaf_items(b if prev == a else a)
            vals = sim[i, other]
            high = int(np.argmax(vals))
            if running_min <= vals[high]:
                return TcCheck(False, (i, running_arg, int(other[high])))
            low = int(np.argmin(vals))
            if vals[low] < running_min:
                running_min = vals[low]
                running_arg = int(other[low])
            prev = node
            node = tree.parent(node)
    return TcCheck(True, None)


def check_tc_direct(tree: ClusterTree, sim: np.ndarray) -> TcCheck:
    """Literal triple-by-triple tight-clustering check (reference oracle).

    Enumerates every cluster C and tests all pairs inside C against the
    worst outside item, exactly as the condition is defined.  O(N^3); kept
    independent of the ancestor-path reformulation in :func:`check_tc`.
    """
    sim = _check_dims(tree, sim)
    n = tree.n_leaves
    all_items = np.arange(n)
    for node in range(n, tree.n_nodes):
        members = tree.leaf_items(node)
        if len(members) == n:
            continue  # no outside item to compare against
        outside = np.setdiff1d(all_items, members, assume_unique=True)
        cross = sim[np.ix_(members, outside)]
        out_max = cross.max(axis=1)
        intra = sim[np.ix_(members, members)]
        threshold = np.maximum.outer(out_max, out_max)
        bad = intra <= threshold
        np.fill_diagonal(bad, False)
        if bad.any():
            bi, bj = map(int, np.argwhere(bad)[0])
            i, j = int(members[bi]), int(members[bj])
            k = int(outside[np.argmax(np.maximum(cross[bi], cross[bj]))])
            return TcCheck(False, (i, j, k))
    return TcCheck(True, None)
