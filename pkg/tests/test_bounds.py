import math

import numpy as np
import pytest

from sparseclust import bounds

from oracles import (
    connected_probability_bruteforce,
    connected_probability_recurrence,
    mp_connectivity_lower_bound,
    mp_inter_rate,
    mp_intra_rate,
    mp_middle_terms,
    mp_power_law_min_items,
    mp_power_law_rate,
)

# frozen high-precision oracle values (tests/oracles.py, mpmath at 60 digits)
INTRA_TERM2_N4 = 0.490175471466
INTRA_1000_75 = 0.232900597623
INTER_1000_100 = 0.0995969136259
RATE_1000_75_K3 = 0.552620422319
SAMPLES_1000_75_K3 = 276033.900948
LINEAR_1000_D01_K3 = 0.414465316739
MIN_ITEMS_A05_D05_B066_K3 = 21


# -- intra-cluster rate ------------------------------------------------------------


def test_intra_rate_second_term_at_n4():
    # the parameter-free term at n=4: 1 - (2^(1/3) - 1)^(1/2)
    _, term2 = bounds.intra_rate_terms(4, 4, 0.05)
    assert term2 == pytest.approx(INTRA_TERM2_N4, abs=1e-5)
    # ... and it does not depend on N or alpha
    assert term2 == bounds.intra_rate_terms(5000, 4, 0.7)[1]


def test_intra_rate_frozen_value():
    assert bounds.intra_rate(1000, 75, 0.05) == pytest.approx(
        INTRA_1000_75, abs=1e-9
    )


def test_intra_rate_alpha_to_zero_approaches_one():
    previous = 0.0
    for alpha in (1e-2, 1e-6, 1e-12, 1e-50):
        rate = bounds.intra_rate(1000, 8, alpha)
        assert rate >= previous
        previous = rate
    assert bounds.intra_rate(1000, 8, 1e-300) > 0.999


def test_intra_rate_matches_high_precision_oracle():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n_items = int(rng.integers(4, 100_000))
        cluster = int(rng.integers(4, n_items + 1))
        alpha = float(rng.uniform(1e-6, 0.999))
        got = bounds.intra_rate(n_items, cluster, alpha)
        want = mp_intra_rate(n_items, cluster, alpha)
        assert got == pytest.approx(want, abs=1e-12)
        assert 0.0 < got < 1.0


def test_intra_rate_domain_errors():
    with pytest.raises(ValueError):
        bounds.intra_rate(3, 3, 0.05)
    with pytest.raises(ValueError):
        bounds.intra_rate(10, 3, 0.05)
    with pytest.raises(ValueError):
        bounds.intra_rate(10, 11, 0.05)
    with pytest.raises(ValueError):
        bounds.intra_rate(10, 4, 0.0)


# -- inter-cluster rate -------------------------------------------------------------


def test_inter_rate_frozen_value():
    assert bounds.inter_rate(1000, 100, 0.05) == pytest.approx(
        INTER_1000_100, abs=1e-4
    )
    assert bounds.inter_rate(1000, 100, 0.05) == pytest.approx(
        mp_inter_rate(1000, 100, 0.05), abs=1e-12
    )


def test_inter_rate_in_unit_interval_and_zero_at_equal_sizes():
    rng = np.random.default_rng(1)
    for _ in range(200):
        n_items = int(rng.integers(2, 10_000))
        cluster = int(rng.integers(1, n_items))
        alpha = float(rng.uniform(1e-6, 0.999))
        rate = bounds.inter_rate(n_items, cluster, alpha)
        assert 0.0 < rate < 1.0
    assert bounds.inter_rate(50, 50, 0.05) == 0.0  # no other cluster to reach


def test_inter_rate_increasing_in_n_items():
    rates = [bounds.inter_rate(n, 100, 0.05) for n in (200, 500, 1000, 5000, 20000)]
    assert rates == sorted(rates)
    assert rates[0] < rates[-1]


# -- combined exact rate --------------------------------------------------------------


def test_recovery_rate_is_max_of_components():
    rng = np.random.default_rng(2)
    for _ in range(100):
        n_items = int(rng.integers(6, 5000))
        cluster = int(rng.integers(4, n_items))
        alpha = float(rng.uniform(1e-4, 0.99))
        combined = bounds.recovery_rate(n_items, cluster, alpha)
        assert combined == max(
            bounds.intra_rate(n_items, cluster, alpha),
            bounds.inter_rate(n_items, cluster, alpha),
        )


def test_recovery_rate_non_increasing_in_alpha():
    alphas = np.linspace(0.01, 0.9, 30)
    rates = [bounds.recovery_rate(1000, 75, float(a)) for a in alphas]
    assert all(a >= b - 1e-15 for a, b in zip(rates, rates[1:]))


def test_recovery_rate_requires_smaller_cluster():
    with pytest.raises(ValueError):
        bounds.recovery_rate(100, 100, 0.05)


# -- asymptotic rates ------------------------------------------------------------------


def test_power_law_rate_headline_example():
    rate = bounds.rate_for_cluster_size(1000, 75, 3.0)
    assert rate == pytest.approx(RATE_1000_75_K3, abs=5e-4)
    assert rate == pytest.approx(0.5526, abs=5e-4)
    samples = bounds.expected_samples(1000, rate)
    assert samples == pytest.approx(SAMPLES_1000_75_K3, rel=1e-9)
    assert abs(samples - 276020) / 276020 < 1e-3


def test_linear_rate_headline_example():
    rate = bounds.linear_rate(1000, 0.1, 3.0)
    assert rate == pytest.approx(LINEAR_1000_D01_K3, abs=5e-4)
    assert rate < 0.42


def test_power_law_rate_matches_oracle_and_linear_special_case():
    rng = np.random.default_rng(3)
    for _ in range(100):
        n_items = int(rng.integers(4, 10**6))
        delta = float(rng.uniform(0.01, 1.0))
        beta = float(rng.uniform(0.05, 1.0))
        kappa = float(rng.uniform(3.0, 8.0))
        raw = bounds.power_law_rate(n_items, delta, beta, kappa, clamp=False)
        assert raw == pytest.approx(mp_power_law_rate(n_items, delta, beta, kappa), rel=1e-12)
        assert bounds.power_law_rate(n_items, delta, beta, kappa) == min(1.0, max(0.0, raw))
    assert bounds.linear_rate(777, 0.3, 3.0, clamp=False) == bounds.power_law_rate(
        777, 0.3, 1.0, 3.0, clamp=False
    )


def test_power_law_rate_clamp_engages_for_tiny_beta():
    # nearly size-independent clusters need a rate past 1: the clamp bites
    raw = bounds.power_law_rate(1000, 1.0, 0.01, 3.0, clamp=False)
    assert raw > 1.0
    assert bounds.power_law_rate(1000, 1.0, 0.01, 3.0) == 1.0


def test_power_law_rate_decreasing_in_n_at_scale():
    rates = [
        bounds.power_law_rate(n, 0.5, 0.66, 3.0, clamp=False)
        for n in (10**2, 10**3, 10**4, 10**5, 10**6)
    ]
    assert all(a > b for a, b in zip(rates, rates[1:]))


def test_power_law_rate_warns_below_min_items():
    with pytest.warns(UserWarning):
        bounds.power_law_rate(5, 0.5, 0.66, 3.0, alpha=0.05)


def test_min_items_values():
    assert bounds.power_law_min_items(0.05, 0.5, 0.66, 3.0) == MIN_ITEMS_A05_D05_B066_K3
    # both power terms land below 4 here, so the floor of 4 rules
    assert bounds.power_law_min_items(0.9, 1.0, 1.0, 4.0) == 4
    assert bounds.linear_min_items(0.05, 0.1, 3.0) == 25
    rng = np.random.default_rng(4)
    for _ in range(100):
        alpha = float(rng.uniform(1e-4, 0.99))
        delta = float(rng.uniform(0.01, 1.0))
        beta = float(rng.uniform(0.05, 1.0))
        kappa = float(rng.uniform(3.0, 10.0))
        assert bounds.power_law_min_items(alpha, delta, beta, kappa) == (
            mp_power_law_min_items(alpha, delta, beta, kappa)
        )


def test_min_items_limit_for_large_kappa():
    assert bounds.power_law_min_items(0.05, 0.5, 0.66, 200.0) == 4


def test_expected_samples_within_linear_budget():
    # at the linear-regime rate, the expected pair count stays below
    # (kappa/delta) * N * ln N on a parameter grid
    for n_items in (100, 1000, 10_000):
        for delta in (0.05, 0.1, 0.5, 1.0):
            for kappa in (3.0, 5.0):
                p = bounds.linear_rate(n_items, delta, kappa, clamp=False)
                samples = bounds.expected_samples(n_items, p)
                budget = (kappa / delta) * n_items * math.log(n_items)
                assert samples <= budget + 1e-9


def test_exact_rate_below_asymptotic_rate_on_grid():
    """The simplified rate dominates the exact one wherever it claims to
    (n = delta * N^beta >= 4 and N at or above the minimum item count)."""
    violations = []
    for delta in (0.1, 0.3, 0.5, 0.8, 1.0):
        for beta in (0.3, 0.5, 0.66, 0.8, 1.0):
            for alpha in (0.01, 0.05, 0.2, 0.5):
                for kappa in (3.0, 4.0, 6.0):
                    min_items = bounds.power_law_min_items(alpha, delta, beta, kappa)
                    for n_items in (50, 200, 1000, 5000, 20000):
                        if n_items < min_items:
                            continue
                        cluster = int(delta * n_items**beta)
                        if cluster < 4 or cluster >= n_items:
                            continue
                        exact = bounds.recovery_rate(n_items, cluster, alpha)
                        asym = bounds.power_law_rate(
                            n_items, delta, beta, kappa, clamp=False
                        )
                        if exact > asym + 1e-12:
                            violations.append(
                                (n_items, delta, beta, alpha, kappa, exact, asym)
                            )
    assert not violations, f"dominance violated at: {violations[:5]}"


# -- connectivity lower bound -----------------------------------------------------------


def test_connectivity_bound_certain_at_p_one():
    for n in (2, 3, 5, 9, 40):
        assert bounds.connectivity_lower_bound(n, 1.0) == 1.0


def test_connectivity_bound_two_nodes_documents_slack():
    # printed formula at n=2 collapses to 1 - 2q; the exact value is p = 1 - q
    for p in np.linspace(0.0, 1.0, 21):
        bound = bounds.connectivity_lower_bound(2, float(p))
        assert bound == pytest.approx(1 - 2 * (1 - p), abs=1e-12)
        assert bound <= p + 1e-12  # never exceeds the exact probability


def test_connectivity_bound_matches_high_precision_oracle():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(2, 60))
        p = float(rng.uniform(0.0, 1.0))
        got = bounds.connectivity_lower_bound(n, p)
        assert got == pytest.approx(mp_connectivity_lower_bound(n, p), rel=1e-9, abs=1e-9)


def test_connectivity_bound_below_exact_probability():
    # brute-force enumeration for n <= 6, counting recurrence beyond
    for n in (4, 5, 6):
        for p in np.arange(0.05, 1.0, 0.05):
            exact = connected_probability_bruteforce(n, float(p))
            recur = connected_probability_recurrence(n, float(p))
            assert exact == pytest.approx(recur, abs=1e-10)  # oracles agree
            assert bounds.connectivity_lower_bound(n, float(p)) <= exact + 1e-12
    for n in (7, 8):
        for p in np.arange(0.05, 1.0, 0.05):
            exact = connected_probability_recurrence(n, float(p))
            assert bounds.connectivity_lower_bound(n, float(p)) <= exact + 1e-12


def test_connectivity_bound_domain():
    with pytest.raises(ValueError):
        bounds.connectivity_lower_bound(1, 0.5)
    with pytest.raises(ValueError):
        bounds.connectivity_lower_bound(4, 1.2)


# -- middle-term inequality ---------------------------------------------------------------


def test_middle_term_inequality_edge_cases():
    zero = bounds.middle_term_inequality(6, 0.0)
    assert zero.lhs == zero.rhs == 0.0 and zero.holds
    one = bounds.middle_term_inequality(6, 1.0)
    assert one.lhs == 2 * 2**5
    assert one.rhs == 20 * 2**5
    assert one.holds


def test_middle_term_inequality_matches_oracle():
    rng = np.random.default_rng(6)
    for _ in range(100):
        n = int(rng.integers(4, 201))
        q = float(rng.uniform(0.0, 1.0))
        check = bounds.middle_term_inequality(n, q)
        lhs, rhs = mp_middle_terms(n, q)
        assert check.lhs == pytest.approx(lhs, rel=1e-10)
        assert check.rhs == pytest.approx(rhs, rel=1e-10)
        assert check.holds


def test_middle_term_inequality_domain():
    with pytest.raises(ValueError):
        bounds.middle_term_inequality(3, 0.5)
    with pytest.raises(ValueError):
        bounds.middle_term_inequality(5, -0.1)


def test_clamp_unit():
    assert bounds.clamp_unit(-0.3) == 0.0
    assert bounds.clamp_unit(0.4) == 0.4
    assert bounds.clamp_unit(2.7) == 1.0
