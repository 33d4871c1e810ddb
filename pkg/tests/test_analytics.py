import math

import pytest

from primetower.analytics import (
    C1,
    F_prefix,
    F_sum,
    F_sum_squarefree,
    J_count,
    asymptotic_residual,
    big_run_census,
    edge_tail,
    edge_tail_ratio,
    eps_monitor,
    estimate_c2,
    height_monitor,
    height_tail,
    height_tail_global,
    progression_quantity,
    residual_monitor,
    rho_monitor,
    run_bound_monitor,
    same_tree_gaps,
    smooth_omega_census,
)
from primetower.errors import InvalidArgument, OutOfRange
from primetower.trees import NONPLANAR, PLANAR

from . import oracles


def test_F_small_values(small_sieve):
    assert F_sum(1, small_sieve) == 1
    assert F_sum(4, small_sieve) == 7
    assert F_sum(10, small_sieve) == 23
    assert F_sum(10, small_sieve) == sum(2 ** oracles.omega(n) for n in range(1, 11))


def test_F_two_routes(small_sieve):
    for x in (1, 2, 97, 1000, 54_321, 100_000):
        assert F_sum(x, small_sieve) == F_sum_squarefree(x)
    assert F_sum(100_000, small_sieve, partitions=4) == F_sum(100_000, small_sieve)
    P = F_prefix(5000, small_sieve)
    assert all(P[x] == F_sum_squarefree(x) for x in range(0, 5001, 97))


def test_residual_and_c2(big_sieve):
    sieve = big_sieve
    assert asymptotic_residual(1, 1.0, sieve) == 0.0
    c = [estimate_c2(x, sieve) for x in (10**4, 10**5, 10**6)]
    assert max(c) - min(c) <= 0.05
    assert math.isfinite(estimate_c2(100, sieve))
    # drift between consecutive decades shrinks
    assert abs(c[2] - c[1]) < abs(c[1] - c[0])
    c2 = c[2]
    for e in range(10, 21, 2):
        assert abs(asymptotic_residual(2**e, c2, sieve)) <= 10
    assert C1 == pytest.approx(6 / math.pi**2)


def test_J_count(sieve):
    assert J_count(100, 0, sieve) == 100
    assert J_count(16, 0, sieve) <= 16
    with pytest.raises(InvalidArgument):
        J_count(15, 0, sieve)
    ratios = [J_count(x, 3, sieve) / x for x in (10**4, 10**5, 10**6)]
    assert all(0.95 <= r <= 1 for r in ratios)


def test_edge_tail(sieve):
    # 9240 = 2^3 * 3 * 5 * 7 * 11 has seven edges, above 3 log log 10^4
    assert edge_tail(10**4, sieve) == 12
    brute = sum(oracles.n_edges(oracles.tree(n)) >= 3 * math.log(math.log(10**4)) for n in range(1, 10**4 + 1))
    assert brute == 12
    assert edge_tail(16, sieve) <= 16
    for x in (10**5, 10**6):
        assert edge_tail_ratio(x, edge_tail(x, sieve)) < 1


def test_height_tails(small_sieve, sieve):
    assert height_tail(0, 16, 2, small_sieve) == 5
    assert height_tail(100, 50, 1, small_sieve) == 50
    assert height_tail(0, 50, 1, small_sieve) == 49
    assert height_tail_global(16, 2, small_sieve) == 5
    assert height_monitor(sieve).passed


def test_big_run_census(sieve):
    assert big_run_census(100, 2, NONPLANAR, sieve) >= 1
    assert big_run_census(100, 2, NONPLANAR, sieve) == 15
    brute = sum(oracles.unordered_form(oracles.tree(n + 1)) == oracles.unordered_form(oracles.tree(n + 2))
                for n in range(1, 101))
    assert brute == 15
    for x in (10**4, 10**5, 10**6 - 4):
        for g in (2, 3, 4):
            assert big_run_census(x, g, NONPLANAR, sieve) * math.log(g) / x < 0.1
    assert big_run_census(10, 10**6, NONPLANAR, sieve) == 0
    with pytest.raises(OutOfRange):
        big_run_census(10, 2 * 10**6, NONPLANAR, sieve)


def test_smooth_omega_census(small_sieve):
    assert smooth_omega_census(100, 0, 1, small_sieve) == 26
    assert smooth_omega_census(1000, 0, 64, small_sieve) == 1000
    a = 10 * 2 + 1 + 1  # k = 2: a = 10k + alpha(2) + alpha(3)
    v = [smooth_omega_census(x, 2, a, small_sieve) for x in (100, 1000, 10_000)]
    assert v[0] < v[1] < v[2]


def test_same_tree_gaps(sieve):
    assert same_tree_gaps(2, 100, PLANAR, sieve).max_gap == 8
    g = [same_tree_gaps(2, x, PLANAR, sieve).max_gap for x in (10**4, 10**5, 10**6)]
    assert g[0] < g[1] < g[2]
    rep = same_tree_gaps(7, 7, PLANAR, sieve)
    assert rep.max_gap is None and rep.to_dict()["status"] == "ABSENT"


def test_progression_quantity():
    assert progression_quantity(10, 10, 3) == 0
    assert progression_quantity(20, 10, 2) == pytest.approx(2 * math.log(22 / 12))


def test_monitors(sieve):
    assert run_bound_monitor(10**6, sieve).passed
    empty = run_bound_monitor(5, sieve)
    assert empty.observed_max_ratio == 0 and empty.passed
    assert eps_monitor(10**5, sieve).observed_max_ratio <= 1.0
    r = rho_monitor(10**5)
    assert r.passed and r.witness_n == 6
    res = residual_monitor(sieve)
    assert res.passed and res.to_dict()["pass"] is True
