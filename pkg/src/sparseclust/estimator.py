"""scikit-learn estimator wrapping the zero-filled agglomerative core."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array

from .clustering import incomplete_agglomerative
from .validation import check_observation_mask


class IncompleteAgglomerativeClustering(ClusterMixin, BaseEstimator):
    """Single-linkage clustering of a partially observed similarity matrix.

    The input to :meth:`fit` is a precomputed N x N similarity matrix.
    Unobserved pairs are either marked explicitly with the ``observed``
    boolean mask, or implicitly by storing 0 at unobserved entries
    (similarities themselves must be strictly positive).

    Parameters
    ----------
    method : {"scan", "heap"}
        Merge-loop implementation; both give identical results.

    Attributes
    ----------
    forest_ : MergeForest
        Full merge history and final roots.
    children_ : ndarray of shape (n_merges, 2)
        Merged node pairs, scipy-linkage style.
    merge_similarities_ : ndarray of shape (n_merges,)
        Similarity at each merge, non-increasing.
    labels_ : ndarray of shape (n_items,)
        Cluster label per item: one label per root of the forest (a single
        cluster when the observed pairs connect everything).
    n_clusters_ : int
        Number of roots.
    forced_halt_ : bool
        True when the merge loop ran out of observed similarities before
        reaching a single cluster.
    """

    def __init__(self, method: str = "scan"):
        self.method = method

    def fit(self, X, y=None, observed=None):
        """Cluster items from the observed entries of ``X``.

        Parameters
        ----------
        X : array-like of shape (n_items, n_items)
            Symmetric similarity matrix.  Entries equal to 0 are treated as
            unobserved when ``observed`` is not given.
        observed : array-like of bool, shape (n_items, n_items), optional
            Explicit observation mask (symmetric, diagonal ignored).
        """
        X = check_array(X, dtype=np.float64, ensure_min_samples=2)
        if X.shape[0] != X.shape[1]:
            raise ValueError("similarity matrix must be square")
        if not np.array_equal(X, X.T):
            raise ValueError("similarity matrix must be symmetric")
        if observed is None:
            mask = X > 0
            np.fill_diagonal(mask, False)
        else:
            mask = check_observation_mask(np.asarray(observed), X.shape[0]).copy()
            np.fill_diagonal(mask, False)
        # unobserved entries may legitimately hold the 0 sentinel; replace
        # them with a positive placeholder the core never reads
        sim = np.where(mask, X, 1.0)
        np.fill_diagonal(sim, 0.0)

        forest = incomplete_agglomerative(sim, mask, method=self.method)
        self.forest_ = forest
        self.children_ = forest.children
        self.merge_similarities_ = forest.values
        self.n_clusters_ = len(forest.roots)
        self.forced_halt_ = forest.forced_halt
        labels = np.empty(X.shape[0], dtype=np.int64)
        for label, root in enumerate(forest.roots):
            labels[forest.leaf_items(root)] = label
        self.labels_ = labels
        self.n_features_in_ = X.shape[1]
        return self

    def cluster_sets(self, n_min: int = 1) -> set[frozenset]:
        """Leaf sets of all fitted clusters with at least ``n_min`` items."""
        if not hasattr(self, "forest_"):
            raise AttributeError("estimator is not fitted yet; call fit first")
        return self.forest_.cluster_sets(n_min)
