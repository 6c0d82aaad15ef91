"""Closed-form sampling-rate bounds for recovery from random pair observations.

All rates answer the same question from different angles: how large must the
per-pair observation probability p be so that, with probability at least
1 - alpha, agglomerative clustering on the observed pairs reproduces every
cluster of at least a given size?

Values are computed with expm1/log1p formulations so that quantities of the
form 1 - base^(small exponent) stay accurate for large cluster sizes.  Raw
(unclamped) values are preserved wherever an inequality is being tested;
clamping into [0, 1] happens only at the probability-reporting boundary.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

# constant baked into the union-bound derivation of the intra-cluster rate
# (the dummy-variable choice C = alpha * n / (78 N))
UNION_BOUND_CONSTANT = 78.0
# factor by which the mixed-exponent middle term of the connectivity bound is
# relaxed to a common-exponent form (2 * lambda with lambda = 10)
MIDDLE_TERM_FACTOR = 20.0


def clamp_unit(x: float) -> float:
    """Clamp a raw bound value into [0, 1] for reporting as a probability."""
    return min(1.0, max(0.0, x))


def expected_samples(n_items: int, p: float) -> float:
    """Expected number of observed unordered pairs at rate p."""
    return p * n_items * (n_items - 1) / 2.0


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def intra_rate_terms(
    n_items: int, cluster_size: int, alpha: float
) -> tuple[float, float]:
    """The two terms whose maximum is :func:`intra_rate`.

    The first, 1 - (alpha n / 78 N)^(2/n), carries the failure budget; the
    second, 1 - (2^(1/(n-1)) - 1)^(2/n), is parameter-free.  Both lie in
    (0, 1).
    """
    n_items, cluster_size = int(n_items), int(cluster_size)
    _require(n_items >= 4, "n_items must be >= 4")
    _require(4 <= cluster_size <= n_items, "cluster_size must be in [4, n_items]")
    _require(0.0 < alpha < 1.0, "alpha must be in (0, 1)")
    n = cluster_size
    term1 = -math.expm1(
        (2.0 / n) * math.log(alpha * n / (UNION_BOUND_CONSTANT * n_items))
    )
    # 2^(1/(n-1)) - 1 evaluated as expm1(log 2 / (n-1)) to keep precision
    term2 = -math.expm1((2.0 / n) * math.log(math.expm1(math.log(2.0) / (n - 1))))
    return term1, term2


def intra_rate(n_items: int, cluster_size: int, alpha: float) -> float:
    """Rate making every cluster's induced sampling subgraph connected.

    Sufficient observation probability so that all (at most N/n) clusters of
    size >= cluster_size have connected sampling subgraphs with probability
    >= 1 - alpha/2.
    """
    return max(intra_rate_terms(n_items, cluster_size, alpha))


def inter_rate(n_items: int, cluster_size: int, alpha: float) -> float:
    """Rate giving every cluster at least one edge to each other cluster.

    Sufficient observation probability so that, with probability
    >= 1 - alpha/2, each cluster of size >= cluster_size observes at least
    one similarity into every one of the at most N - n other clusters.
    Returns 0 when cluster_size == n_items (no other cluster exists).
    """
    n_items, cluster_size = int(n_items), int(cluster_size)
    _require(1 <= cluster_size <= n_items, "cluster_size must be in [1, n_items]")
    _require(0.0 < alpha < 1.0, "alpha must be in (0, 1)")
    if cluster_size == n_items:
        return 0.0
    return -math.expm1(
        math.log(alpha / (2.0 * (n_items - cluster_size))) / cluster_size
    )


def recovery_rate(n_items: int, cluster_size: int, alpha: float) -> float:
    """Rate recovering the full hierarchy down to ``cluster_size``.

    Sufficient observation probability so that, with probability
    >= 1 - alpha, every cluster of size >= cluster_size is resolved and so
    is the hierarchy between those clusters: the maximum of
    :func:`intra_rate` and :func:`inter_rate`.
    """
    _require(cluster_size < int(n_items), "cluster_size must be < n_items")
    return max(
        intra_rate(n_items, cluster_size, alpha),
        inter_rate(n_items, cluster_size, alpha),
    )


def power_law_rate(
    n_items: int,
    delta: float,
    beta: float,
    kappa: float,
    alpha: float | None = None,
    clamp: bool = True,
) -> float:
    """Asymptotic rate for clusters of size >= delta * N^beta.

    Evaluates (2 kappa / delta) * N^(-beta) * ln N, the simplified sufficient
    rate with oversampling factor kappa >= 3.  Equals
    ``rate_for_cluster_size(N, delta * N**beta, kappa)``.  When ``alpha`` is
    given, warns if ``n_items`` is below the minimum item count under which
    the simplification is valid (see :func:`power_law_min_items`).
    """
    n_items = int(n_items)
    _require(n_items >= 1, "n_items must be >= 1")
    _require(0.0 < delta <= 1.0, "delta must be in (0, 1]")
    _require(0.0 < beta <= 1.0, "beta must be in (0, 1]")
    _require(kappa >= 3.0, "kappa must be >= 3")
    if alpha is not None and n_items < power_law_min_items(alpha, delta, beta, kappa):
        warnings.warn(
            f"n_items={n_items} is below the minimum item count for these "
            "parameters; the rate is not a guaranteed bound",
            stacklevel=2,
        )
    raw = (2.0 * kappa / delta) * n_items ** (-beta) * math.log(n_items)
    return clamp_unit(raw) if clamp else raw


def power_law_min_items(alpha: float, delta: float, beta: float, kappa: float) -> int:
    """Minimum item count under which :func:`power_law_rate` is a valid bound."""
    _require(0.0 < alpha < 1.0, "alpha must be in (0, 1)")
    _require(0.0 < delta <= 1.0, "delta must be in (0, 1]")
    _require(0.0 < beta <= 1.0, "beta must be in (0, 1]")
    _require(kappa >= 3.0, "kappa must be >= 3 (exponents must stay negative)")
    term2 = (alpha / 2.0) ** (1.0 / (1.0 - 2.0 * kappa))
    term3 = (alpha * delta / UNION_BOUND_CONSTANT) ** (1.0 / (1.0 - beta - kappa))
    return math.ceil(max(4.0, term2, term3))


def linear_rate(
    n_items: int,
    delta: float,
    kappa: float,
    alpha: float | None = None,
    clamp: bool = True,
) -> float:
    """Asymptotic rate for clusters of size >= delta * N: the beta = 1 case.

    (2 kappa / delta) * ln N / N; in expectation this costs about
    (kappa / delta) * N * ln N observed pairs.
    """
    return power_law_rate(n_items, delta, 1.0, kappa, alpha=alpha, clamp=clamp)


def linear_min_items(alpha: float, delta: float, kappa: float) -> int:
    """Minimum item count for :func:`linear_rate` to be a valid bound."""
    return power_law_min_items(alpha, delta, 1.0, kappa)


def rate_for_cluster_size(
    n_items: int, cluster_size: float, kappa: float, clamp: bool = True
) -> float:
    """Cluster-size form of the asymptotic rate: 2 kappa ln(N) / n."""
    _require(int(n_items) >= 1, "n_items must be >= 1")
    _require(cluster_size > 0, "cluster_size must be positive")
    _require(kappa >= 3.0, "kappa must be >= 3")
    raw = 2.0 * kappa * math.log(int(n_items)) / cluster_size
    return clamp_unit(raw) if clamp else raw


def connectivity_lower_bound(n: int, p: float) -> float:
    """Closed-form lower bound on the connectivity of a Bernoulli graph.

    For a graph on n nodes with independent edge probability p, returns

        1 - q^(n-1) ((1+q^((n-2)/2))^(n-1) - q^((n-1)(n-2)/2))
          - q^(n/2) ((1+q^((n-2)/2))^(n-1) - 1),      q = 1 - p.

    The raw value may be negative for small p; callers clamp for display
    only, so that inequality tests see the bound exactly as printed.
    """
    n = int(n)
    _require(n >= 2, "n must be >= 2")
    _require(0.0 <= p <= 1.0, "p must be in [0, 1]")
    q = 1.0 - p
    if q == 0.0:
        return 1.0
    lq = math.log(q)
    log_inner = (n - 1) * math.log1p(math.exp(0.5 * (n - 2) * lq))
    term1 = math.exp((n - 1) * lq + log_inner) - math.exp(
        (n - 1) * lq + 0.5 * (n - 1) * (n - 2) * lq
    )
    term2 = math.exp(0.5 * n * lq) * math.expm1(log_inner)
    return 1.0 - term1 - term2


@dataclass(frozen=True)
class InequalityCheck:
    lhs: float
    rhs: float
    holds: bool


def middle_term_inequality(n: int, q: float) -> InequalityCheck:
    """Check the relaxation used on the connectivity bound's middle term.

    Verifies 2 q^(n/2) (1+q^((n-2)/2))^(n-1) <= 20 q^(n/2) (1+q^(n/2))^(n-1)
    for n >= 4 and q in [0, 1]: trading the smaller exponent (n-2)/2 for n/2
    costs at most a factor of 10.
    """
    n = int(n)
    _require(n >= 4, "n must be >= 4")
    _require(0.0 <= q <= 1.0, "q must be in [0, 1]")
    common = q ** (n / 2.0)
    lhs = 2.0 * common * (1.0 + q ** ((n - 2) / 2.0)) ** (n - 1)
    rhs = MIDDLE_TERM_FACTOR * common * (1.0 + q ** (n / 2.0)) ** (n - 1)
    return InequalityCheck(lhs=lhs, rhs=rhs, holds=lhs <= rhs)
