"""File formats: tree JSON, similarity CSV/binary, mask pair lists, forests.

Formats are deliberately small:

* tree JSON       nested objects, ``{"leaf": i}`` or ``{"children": [a, b]}``
* similarity      CSV (N rows x N columns) or binary: magic ``SPCL``,
                  little-endian u32 N, then N*N row-major float64
* mask            text lines ``i,j`` listing observed upper-triangle pairs
* forest JSON     merge list, roots and the forced-halt flag
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .clustering import MergeForest, RecoveryReport
from .tree import ClusterTree

SIMILARITY_MAGIC = b"SPCL"


# -- trees -------------------------------------------------------------------


def tree_to_obj(tree: ClusterTree) -> dict:
    """Nested-dict form of a hierarchy."""
    objs: list[dict] = [{"leaf": i} for i in range(tree.n_leaves)]
    for a, b in tree.children:
        objs.append({"children": [objs[a], objs[b]]})
    return objs[-1]


def tree_from_obj(obj: dict) -> ClusterTree:
    """Parse the nested-dict form back into a :class:`ClusterTree`."""
    # first pass: count and validate leaves
    leaves = []
    stack = [obj]
    while stack:
        node = stack.pop()
        if "leaf" in node:
            leaves.append(int(node["leaf"]))
        elif "children" in node:
            kids = node["children"]
            if len(kids) != 2:
                raise ValueError("internal tree nodes must have exactly 2 children")
            stack.extend(kids)
        else:
            raise ValueError("tree nodes must have a 'leaf' or 'children' key")
    n = len(leaves)
    if sorted(leaves) != list(range(n)):
        raise ValueError("leaves must carry each item id 0..N-1 exactly once")

    # second pass: post-order assembly
    children: list[tuple[int, int]] = []
    resolved: dict[int, int] = {}
    stack2: list[tuple[dict, bool]] = [(obj, False)]
    while stack2:
        node, expanded = stack2.pop()
        if "leaf" in node:
            resolved[id(node)] = int(node["leaf"])
            continue
        kids = node["children"]
        if not expanded:
            stack2.append((node, True))
            stack2.append((kids[1], False))
            stack2.append((kids[0], False))
        else:
            a = resolved.pop(id(kids[0]))
            b = resolved.pop(id(kids[1]))
            children.append((a, b))
            resolved[id(node)] = n + len(children) - 1
    return ClusterTree(n, np.array(children, dtype=np.int64).reshape(-1, 2))


def save_tree(path, tree: ClusterTree) -> None:
    Path(path).write_text(json.dumps(tree_to_obj(tree)) + "\n")


def load_tree(path) -> ClusterTree:
    return tree_from_obj(json.loads(Path(path).read_text()))


def to_newick(tree: ClusterTree) -> str:
    """Newick rendering (convenience export; JSON is the round-trip format)."""
    parts: list[str] = [str(i) for i in range(tree.n_leaves)]
    for a, b in tree.children:
        parts.append(f"({parts[a]},{parts[b]})")
    return parts[-1] + ";"


# -- similarity matrices -------------------------------------------------------


def save_similarity(path, sim: np.ndarray) -> None:
    """Write a similarity matrix; ``.csv`` paths get CSV, anything else binary."""
    sim = np.asarray(sim, dtype=np.float64)
    path = Path(path)
    if path.suffix.lower() == ".csv":
        np.savetxt(path, sim, delimiter=",", fmt="%.17g")
    else:
        with open(path, "wb") as fh:
            fh.write(SIMILARITY_MAGIC)
            fh.write(struct.pack("<I", sim.shape[0]))
            fh.write(np.ascontiguousarray(sim, dtype="<f8").tobytes())


def load_similarity(path) -> np.ndarray:
    """Read a similarity matrix, sniffing binary vs CSV from the content."""
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(4)
        if head == SIMILARITY_MAGIC:
            (n,) = struct.unpack("<I", fh.read(4))
            data = np.frombuffer(fh.read(8 * n * n), dtype="<f8")
            if data.size != n * n:
                raise ValueError(f"{path}: truncated similarity file")
            return data.reshape(n, n).astype(np.float64)
    sim = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    if sim.shape[0] != sim.shape[1]:
        raise ValueError(f"{path}: similarity CSV must be square")
    return sim


# -- observation masks ---------------------------------------------------------


def save_mask(path, mask: np.ndarray) -> None:
    """Write the observed upper-triangle pairs, one ``i,j`` line each."""
    mask = np.asarray(mask)
    pairs = np.argwhere(np.triu(mask, k=1))
    with open(path, "w") as fh:
        for i, j in pairs:
            fh.write(f"{i},{j}\n")


def load_mask(path, n: int) -> np.ndarray:
    """Read a pair list back into a symmetric n x n boolean mask."""
    mask = np.zeros((n, n), dtype=bool)
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                i_s, j_s = line.split(",")
                i, j = int(i_s), int(j_s)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: expected 'i,j', got {line!r}")
            if not 0 <= i < j < n:
                raise ValueError(
                    f"{path}:{lineno}: pair ({i},{j}) is not an upper-triangle "
                    f"pair of a {n}-item problem"
                )
            mask[i, j] = mask[j, i] = True
    return mask


# -- merge forests and reports --------------------------------------------------


def forest_to_obj(forest: MergeForest) -> dict:
    return {
        "n_leaves": forest.n_leaves,
        "merges": [[a, b, v] for a, b, v in forest.merges],
        "roots": list(forest.roots),
        "forced_halt": forest.forced_halt,
    }


def forest_from_obj(obj: dict) -> MergeForest:
    merges = obj["merges"]
    return MergeForest(
        n_leaves=int(obj["n_leaves"]),
        children=np.array([[a, b] for a, b, _ in merges], dtype=np.int64).reshape(
            -1, 2
        ),
        values=np.array([v for _, _, v in merges], dtype=np.float64),
        roots=tuple(int(r) for r in obj["roots"]),
        forced_halt=bool(obj["forced_halt"]),
    )


def save_forest(path, forest: MergeForest) -> None:
    Path(path).write_text(json.dumps(forest_to_obj(forest)) + "\n")


def load_forest(path) -> MergeForest:
    return forest_from_obj(json.loads(Path(path).read_text()))


def report_to_obj(report: RecoveryReport) -> dict:
    per_cluster = [
        {"items": sorted(cluster), "recovered": bool(ok)}
        for cluster, ok in sorted(
            report.per_cluster.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))
        )
    ]
    return {
        "n_min": report.n_min,
        "total_clusters": report.total_clusters,
        "recovered": report.recovered,
        "fully_recovered": report.fully_recovered,
        "per_cluster": per_cluster,
    }


def save_report(path, report: RecoveryReport) -> None:
    Path(path).write_text(json.dumps(report_to_obj(report), indent=2) + "\n")
