import numpy as np
import pytest
from hypothesis import given, strategies as st

from sparseclust import (
    ClusterTree,
    TreeShape,
    check_tc,
    check_tc_direct,
    generate_tc_similarities,
    generate_tree,
)

from oracles import brute_force_lca


def random_tree(kind: str, n: int, seed: int) -> ClusterTree:
    return generate_tree(TreeShape(kind, n, seed))


# -- structural invariants -------------------------------------------------------


@given(
    kind=st.sampled_from(["balanced", "random_unbalanced", "caterpillar"]),
    exponent=st.integers(1, 6),
    seed=st.integers(0, 2**32),
)
def test_full_binary_invariants(kind, exponent, seed):
    n = 2**exponent  # power of two so all kinds accept it
    tree = random_tree(kind, n, seed)
    assert tree.n_nodes == 2 * n - 1
    assert tree.size(tree.root) == n
    for t, (a, b) in enumerate(tree.children):
        node = tree.n_leaves + t
        assert tree.size(node) == tree.size(a) + tree.size(b)
        left, right = tree.leaf_set(a), tree.leaf_set(b)
        assert not left & right
        assert left | right == tree.leaf_set(node)


def test_constructor_rejects_malformed_children():
    with pytest.raises(ValueError):
        ClusterTree(3, [[0, 1]])  # missing an internal node
    with pytest.raises(ValueError):
        ClusterTree(3, [[0, 1], [3, 1]])  # node 1 used twice
    with pytest.raises(ValueError):
        ClusterTree(3, [[0, 1], [3, 4]])  # child id >= parent id


# -- lca ----------------------------------------------------------------------


def test_lca_balanced_four_leaves():
    tree = random_tree("balanced", 4, 0)
    left = tree.lca(0, 1)
    assert tree.leaf_set(left) == {0, 1}
    assert tree.lca(0, 3) == tree.root
    assert tree.lca(2, 3) != tree.root


def test_lca_identical_items_rejected():
    tree = random_tree("balanced", 4, 0)
    with pytest.raises(ValueError):
        tree.lca(2, 2)


def test_lca_matches_minimal_covering_cluster():
    for seed in range(5):
        tree = random_tree("random_unbalanced", 12, seed)
        for i in range(12):
            for j in range(i + 1, 12):
                assert tree.lca(i, j) == brute_force_lca(tree, i, j)


# -- cluster_set ------------------------------------------------------------------


def test_cluster_set_balanced_four():
    tree = random_tree("balanced", 4, 0)
    assert tree.cluster_set(2) == {
        frozenset({0, 1}),
        frozenset({2, 3}),
        frozenset({0, 1, 2, 3}),
    }
    assert tree.cluster_set(5) == set()


def test_cluster_set_counts_all_nodes():
    for seed in range(3):
        tree = random_tree("random_unbalanced", 64, seed)
        assert len(tree.cluster_set(1)) == 2 * 64 - 1


# -- prune_to_size ------------------------------------------------------------------


def test_prune_identity_and_root_cases():
    tree = random_tree("random_unbalanced", 10, 3)
    full = tree.prune_to_size(1)
    pruned_sets = set()
    stack = [full]
    while stack:
        node = stack.pop()
        pruned_sets.add(node.items)
        stack.extend(node.children)
    assert pruned_sets == tree.cluster_set(1)
    assert all(len(c) == 1 for c in full.leaf_clusters())

    root_only = tree.prune_to_size(10)
    assert root_only.is_leaf_cluster
    assert root_only.items == frozenset(range(10))


def test_prune_balanced_eight_by_hand():
    tree = random_tree("balanced", 8, 0)
    pruned = tree.prune_to_size(2)
    # three levels: root, two 4-item nodes, four 2-item leaf-clusters
    assert not pruned.is_leaf_cluster
    level2 = pruned.children
    assert all(len(node.items) == 4 for node in level2)
    leaf_clusters = pruned.leaf_clusters()
    assert len(leaf_clusters) == 4
    assert all(len(c) == 2 for c in leaf_clusters)


@given(
    kind=st.sampled_from(["balanced", "random_unbalanced", "caterpillar"]),
    exponent=st.integers(1, 5),
    seed=st.integers(0, 2**32),
    data=st.data(),
)
def test_prune_leaf_clusters_partition_items(kind, exponent, seed, data):
    n = 2**exponent
    tree = random_tree(kind, n, seed)
    n_min = data.draw(st.integers(1, n))
    clusters = tree.prune_to_size(n_min).leaf_clusters()
    seen = set()
    for cluster in clusters:
        assert not cluster & seen
        seen |= cluster
    assert seen == set(range(n))


def test_prune_rejects_bad_n_min():
    tree = random_tree("balanced", 4, 0)
    with pytest.raises(ValueError):
        tree.prune_to_size(0)
    with pytest.raises(ValueError):
        tree.prune_to_size(5)


# -- tight clustering checks ----------------------------------------------------


def three_item_sims():
    return np.array([[0.0, 0.9, 0.2], [0.9, 0.0, 0.3], [0.2, 0.3, 0.0]])


def test_check_tc_three_item_examples():
    sims = three_item_sims()
    matching = ClusterTree(3, [[0, 1], [3, 2]])  # ((0,1),2)
    assert check_tc(matching, sims).ok
    assert check_tc_direct(matching, sims).ok

    wrong = ClusterTree(3, [[0, 2], [3, 1]])  # ((0,2),1)
    verdict = check_tc(wrong, sims)
    assert not verdict.ok
    assert verdict.witness == (0, 2, 1)
    assert not check_tc_direct(wrong, sims).ok


def test_check_tc_dimension_mismatch():
    tree = random_tree("balanced", 4, 0)
    with pytest.raises(ValueError):
        check_tc(tree, three_item_sims())
    with pytest.raises(ValueError):
        check_tc_direct(tree, three_item_sims())


def test_check_tc_generator_outputs_pass_direct_oracle():
    # generator postcondition, judged by the O(N^3) reference check
    rng = np.random.default_rng(0)
    for case in range(100):
        n = int(rng.integers(4, 33))
        tree = random_tree("random_unbalanced", n, case)
        sims = generate_tc_similarities(tree, seed=case * 7 + 1, jitter=0.5)
        assert check_tc_direct(tree, sims).ok


def test_check_tc_agrees_with_direct_oracle():
    # verdict agreement on satisfying and violating instances, N <= 32
    rng = np.random.default_rng(42)
    agree_fail = 0
    for case in range(60):
        n = int(rng.integers(3, 33))
        tree = random_tree("random_unbalanced", n, case)
        if case % 2 == 0:
            sims = generate_tc_similarities(tree, seed=case, jitter=0.5)
        else:
            # arbitrary symmetric positive matrix: almost surely violates
            raw = rng.random((n, n)) + 0.01
            sims = (raw + raw.T) / 2
            np.fill_diagonal(sims, 0.0)
        fast = check_tc(tree, sims)
        direct = check_tc_direct(tree, sims)
        assert fast.ok == direct.ok
        agree_fail += not fast.ok
    assert agree_fail > 0  # the sample really exercised both verdicts


def test_check_tc_witness_is_a_real_violation():
    rng = np.random.default_rng(7)
    for case in range(20):
        n = int(rng.integers(4, 20))
        tree = random_tree("random_unbalanced", n, case)
        raw = rng.random((n, n)) + 0.01
        sims = (raw + raw.T) / 2
        np.fill_diagonal(sims, 0.0)
        verdict = check_tc(tree, sims)
        if verdict.ok:
            continue
        i, j, k = verdict.witness
        cluster = tree.leaf_set(tree.lca(i, j))
        assert i in cluster and j in cluster and k not in cluster
        assert sims[i, j] <= max(sims[i, k], sims[j, k])
