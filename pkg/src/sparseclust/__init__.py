"""Hierarchical clustering from randomly observed pairwise similarities.

Recovers as much of a similarity hierarchy as the observed pairs support
(zero-filled single-linkage agglomeration), provides the closed-form
sampling-rate bounds that predict which clusters survive, and ships a Monte
Carlo harness that validates those bounds on synthetic instances.
"""

from . import bounds
from .clustering import (
    MergeForest,
    RecoveryReport,
    evaluate_recovery,
    incomplete_agglomerative,
)
from .estimator import IncompleteAgglomerativeClustering
from .harness import (
    ExperimentConfig,
    SweepResult,
    SweepRow,
    reference_examples,
    run_trial,
    sweep,
    wilson_interval,
)
from .sampling import (
    DisjointSetForest,
    SamplingGraph,
    build_graph,
    connectivity_report,
    is_connected,
    sample_mask,
)
from .synth import (
    TreeShape,
    assign_levels,
    generate_tc_similarities,
    generate_tree,
    similarities_from_levels,
)
from .tree import ClusterTree, PrunedNode, TcCheck, check_tc, check_tc_direct

__version__ = "0.1.0"

__all__ = [
    "ClusterTree",
    "DisjointSetForest",
    "ExperimentConfig",
    "IncompleteAgglomerativeClustering",
    "MergeForest",
    "PrunedNode",
    "RecoveryReport",
    "SamplingGraph",
    "SweepResult",
    "SweepRow",
    "TcCheck",
    "TreeShape",
    "assign_levels",
    "bounds",
    "build_graph",
    "check_tc",
    "check_tc_direct",
    "connectivity_report",
    "evaluate_recovery",
    "generate_tc_similarities",
    "generate_tree",
    "incomplete_agglomerative",
    "is_connected",
    "reference_examples",
    "run_trial",
    "sample_mask",
    "similarities_from_levels",
    "sweep",
    "wilson_interval",
]
