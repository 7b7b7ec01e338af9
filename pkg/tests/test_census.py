from fractions import Fraction

import pytest

from gfminrank import census as cen
from gfminrank.errors import OddDimension, TooLarge


def test_orthogonal_orders():
    assert [cen.orth_order(n) for n in range(1, 5)] == [1, 2, 6, 48]
    assert cen.orth_constant(3) == Fraction(3, 4)
    for n in range(1, 5):
        assert cen.orth_order(n) == cen.brute_orth_order(n)


def test_rank_k_counts():
    assert cen.n_rank_k_count(2, 1) == 3
    assert cen.n_rank_k_count(2, 2) == 6
    assert cen.n_rank_k_count(3, 2) == 42
    for n, k in [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]:
        assert cen.n_rank_k_count(n, k) == cen.brute_rank_k_count(n, k)
    assert cen.n_rank_k_count(5, 0) == 1


def test_symplectic_orders():
    assert cen.symplectic_order(2) == 6 == cen.brute_symplectic_order(2)
    assert cen.symplectic_order(4) == 720 == cen.brute_symplectic_order(4)
    for m in range(1, 5):
        assert cen.symplectic_order(2 * m) == cen.orth_order(2 * m + 1)
    with pytest.raises(OddDimension):
        cen.symplectic_order(3)


def test_theta_values_and_census():
    assert cen.theta(2, 1) == 3 and cen.theta(2, 2) == 4
    assert cen.theta(4, 0) == 1
    for n in range(1, 6):
        assert [cen.theta(n, k) for k in range(n + 1)] == cen.brute_symmetric_rank_census(n)
    with pytest.raises(TooLarge):
        cen.brute_symmetric_rank_census(6)


def test_theta_totals():
    for n in range(1, 9):
        assert sum(cen.theta(n, k) for k in range(n + 1)) == 2 ** (n * (n + 1) // 2)


def test_theta_strict_bounds():
    for n in range(1, 9):
        for k in range(1, n + 1):
            lo, hi = cen.theta_bounds(n, k)
            assert lo < cen.theta(n, k) < hi


def test_group_order_and_rank_count_bounds():
    for n in range(1, 17):
        assert Fraction(1, 4) < cen.orth_constant(n) <= 1
        for k in range(1, n + 1):
            assert 2 ** (n * k - 2) < cen.n_rank_k_count(n, k) < 2 ** (n * k)


def test_product_bound():
    assert cen.product_bound_check(2)[1] == Fraction(1, 2)
    assert cen.product_bound_check(4)[1] == Fraction(21, 64)
    lo, prod = cen.product_bound_check(20)
    assert lo < prod < Fraction(29, 100)
    for n in range(2, 65):
        cen.product_bound_check(n)


def test_alpha_exact_small():
    assert cen.alpha_exact(1).alpha == 0
    assert cen.alpha_exact(2).alpha == Fraction(1, 4)
    # n = 3: empty graph 0, three single edges 1, three paths 2, triangle 1
    assert cen.alpha_exact(3).alpha == Fraction(0 + 3 * 1 + 3 * 2 + 1, 3 * 8)
    for n in range(2, 6):
        a = cen.alpha_exact(n).alpha
        assert 0 <= a <= Fraction(n - 1, n)
    with pytest.raises(TooLarge):
        cen.alpha_exact(7)


def test_alpha_exact_threads_agree():
    assert cen.alpha_exact(5, threads=2).alpha == cen.alpha_exact(5).alpha


def test_graph_count_bound_dominates():
    for n in range(1, 6):
        counts = cen.graphs_with_mr_at_most(n)
        assert counts[n] == 2 ** (n * (n - 1) // 2)
        for k in range(1, n + 1):
            assert counts[k] <= cen.mr_le_k_graph_bound(n, k)


def test_graph_bound_ratio_vanishes():
    ratios = [cen.graph_bound_ratio(n, n // 2) for n in range(20, 61, 10)]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] < Fraction(1, 10 ** 50)


def test_montecarlo_reproducible():
    a = cen.alpha_montecarlo(8, 30, seed=4)
    b = cen.alpha_montecarlo(8, 30, seed=4)
    c = cen.alpha_montecarlo(8, 30, seed=4, threads=2)
    assert a.to_dict() == b.to_dict() == c.to_dict()
    assert sum(a.mr_histogram.values()) == 30


def test_census_report():
    rep = cen.census(4, brute=True)
    assert rep.consistent
    assert rep.orth_order == 48
    assert [r.theta for r in rep.rows] == [1, 15, 140, 420, 448]
    assert "total" in rep.table()
