"""One test per acceptance criterion, each at its stated tolerance and budget.

The checks live in gfminrank.checks so that ``gfminrank verify-paper`` runs
exactly the same code.
"""

from gfminrank import checks


def test_c01_rank_census_formula(record_check):
    r = record_check(checks.check_rank_census(max_n=5, budget=10.0))
    assert r.passed, r.detail


def test_c02_group_orders(record_check):
    r = record_check(checks.check_group_orders(budget=30.0))
    assert r.passed, r.detail


def test_c03_counting_bounds(record_check):
    r = record_check(checks.check_counting_bounds(max_n=8, product_n=64))
    assert r.passed, r.detail


def test_c04_average_minimum_rank(record_check):
    r = record_check(checks.check_average_minrank(
        exact_max_n=6, sizes=(8, 12, 16, 20), samples=200, seed=checks.ACCEPTANCE_SEED,
        threshold=0.8))
    assert r.passed, r.detail


def test_c05_solver_agreement(record_check):
    r = record_check(checks.check_solver_agreement(
        max_full_n=4, random_n=5, random_count=200, fields=(2, 3, 4, 5), budget=300.0))
    assert r.passed, r.detail


def test_c06_f3_counterexample(record_check):
    r = record_check(checks.check_f3_counterexample(n=10, budget=600.0))
    assert r.passed, r.detail


def test_c07_two_vertices_on_large_clique(record_check):
    r = record_check(checks.check_two_extra_vertices(ns=range(3, 9), fields=(4, 5),
                                                     budget=300.0))
    assert r.passed, r.detail


def test_c08_nonprime_construction(record_check):
    r = record_check(checks.check_nonprime(fields=(4, 8, 9), max_n=12, per=50))
    assert r.passed, r.detail


def test_c09_k_minus_3_construction(record_check):
    r = record_check(checks.check_k_n_minus_3(odd_fields=(5, 7, 9), char2_fields=(4, 8)))
    assert r.passed, r.detail


def test_c10_canonical_forms(record_check):
    r = record_check(checks.check_canonical_forms(max_n=4, fields=(2, 3), image_max_n=3,
                                                  budget=60.0))
    assert r.passed, r.detail
