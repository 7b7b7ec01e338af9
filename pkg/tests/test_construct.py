import random

import pytest

from gfminrank.construct import (
    PATTERN_SLOTS,
    case_alphas,
    column_pattern_profile,
    f3_counterexample_graph,
    k_n_minus_3_construction,
    k_n_minus_3_details,
    k_n_minus_3_instance,
    large_prime_construction,
    leading_minor_completion,
    nonprime_construction,
    random_graph_with_clique,
    scalar_constraints,
    scan_scalar,
    verify_f3_counterexample,
)
from gfminrank.errors import FieldTooSmall, NoClique, PrimeField, RetriesExhausted, TooSmall
from gfminrank.field import make_field
from gfminrank.graph import Graph, pattern_matches, random_graph
from gfminrank.linalg import FMatrix, det, matrix, rank, schur_complement
from gfminrank.minrank import EXHAUSTION, WITNESS, rank_le_search

F3, F4, F5, F7, F8, F9 = (make_field(3), make_field(2, 2), make_field(5), make_field(7),
                          make_field(2, 3), make_field(3, 2))


def leading_minors(B):
    return [det(B.submatrix(range(j), range(j))) for j in range(1, B.nrows + 1)]


def test_leading_minor_completion_examples():
    assert leading_minor_completion(Graph.empty(1), 2) == matrix([[1]], 2)
    assert leading_minor_completion(Graph.complete(2), 3) == matrix([[1, 1], [1, 2]], 3)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_leading_minors_all_one(p):
    for seed in range(30):
        h = random_graph(1 + seed % 8, seed)
        B = leading_minor_completion(h, p)
        assert pattern_matches(B, h)
        assert leading_minors(B) == [1] * h.n


def pendant_k4():
    return Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])


def test_nonprime_examples():
    A = nonprime_construction(pendant_k4(), 4, F4)
    assert pattern_matches(A, pendant_k4()) and rank(A) == 2
    g = random_graph_with_clique(12, 6, seed=1)
    A = nonprime_construction(g, 6, F9)
    assert rank(A) == 7


def test_nonprime_schur_complement_is_all_ones():
    for fs in (F4, F8, F9):
        for seed in range(10):
            n = 6 + seed % 5
            k = 4 + seed % (n - 4)
            g = random_graph_with_clique(n, k, seed, shuffle=False)
            A = nonprime_construction(g, k, fs, clique=range(k))
            assert schur_complement(A, k) == FMatrix.ones(fs, k)


def test_nonprime_errors():
    with pytest.raises(PrimeField):
        nonprime_construction(pendant_k4(), 4, F5)
    with pytest.raises(NoClique):
        nonprime_construction(Graph.path(6), 4, F4)
    with pytest.raises(ValueError):
        nonprime_construction(pendant_k4(), 3, F4)


def test_scalar_scan_f5_values():
    assert scan_scalar(3, F5) == 3
    assert scan_scalar(4, F5) == 2


def test_constraint_lists_generic_alphas():
    # c with 1 + s c != 0 required; compare with the hand-derived lists over a
    # prime large enough that the integers do not collide
    ones = {i: 1 for i in range(1, 13)}
    F13 = make_field(13)
    expected = {1: {1, 2, 3}, 2: {1, 2, 3}, 3: {1, -1, 2, 3}, 4: {1, 2, 3, 4, 6}}
    for case, cs in expected.items():
        got = scalar_constraints(case, F13, ones) - {0}
        assert got == {c % 13 for c in cs}


def test_constraint_lists_f5_alphas():
    assert scalar_constraints(3, F5) - {0} == {1, 4, 2}       # 1, -1, 2
    assert scalar_constraints(4, F5) - {0} == {1, 4, 3}       # 1, -1, 3
    assert case_alphas(4, F5)[12] == 2 and case_alphas(3, F5)[7] == 4


def test_f7_case4_all_ones():
    a = scan_scalar(4, F7)
    assert all(F7.add(1, F7.mul(a, c)) for c in (1, 2, 3, 4, 6)) and a != 0
    g = k_n_minus_3_instance(9, 4, seed=3)
    d = k_n_minus_3_details(g, F7)
    assert d.case == 4 and d.scalar == a and rank(d.matrix) == 4


@pytest.mark.parametrize("fs", [F5, F7, F9, make_field(11)])
def test_k_n_minus_3_all_cases(fs):
    for case in (1, 2, 3, 4):
        for seed in range(8):
            n = 5 + seed % 6
            g = k_n_minus_3_instance(n, case, seed)
            d = k_n_minus_3_details(g, fs)
            assert d.case == case and not d.delegated
            assert pattern_matches(d.matrix, g) and rank(d.matrix) <= 4
            assert sum(d.profile.values()) == n - 3


def test_k_n_minus_3_char_2_delegates():
    for fs in (F4, F8):
        for case in (1, 2, 3, 4):
            g = k_n_minus_3_instance(8, case, seed=case)
            d = k_n_minus_3_details(g, fs)
            assert d.delegated and rank(d.matrix) == 4
            assert d.matrix == nonprime_construction(g, 5, fs, clique=g.clique)


def test_k_n_minus_3_errors():
    g = k_n_minus_3_instance(7, 2, seed=0)
    with pytest.raises(FieldTooSmall):
        k_n_minus_3_construction(g, F3)
    with pytest.raises(NoClique):
        k_n_minus_3_construction(Graph.path(7), F5)


def test_k_n_minus_3_agrees_with_search():
    for seed in range(6):
        n = 5 + seed % 5
        g = k_n_minus_3_instance(n, 1 + seed % 4, seed)
        for fs in (F5, F7):
            assert rank(k_n_minus_3_construction(g, fs)) <= 4
            assert rank_le_search(g, fs, 4).kind == WITNESS


def test_column_pattern_profile():
    g = f3_counterexample_graph(10)
    prof = column_pattern_profile(g, range(7), [8, 9, 7])
    # every vertex of 0..6 also sees clique vertex 7
    assert prof[(0, 0, 1)] == 1 and prof[(1, 0, 1)] == 2 and prof[(0, 1, 1)] == 2
    assert prof[(1, 1, 1)] == 2
    assert sum(prof.values()) == 7
    assert set(prof) == set(PATTERN_SLOTS)


def test_f3_family_graph():
    g = f3_counterexample_graph(10)
    assert g.num_edges == 36
    assert not any(g.has_edge(a, b) for a in (7, 8, 9) for b in (7, 8, 9) if a != b)
    assert g.clique == tuple(range(8))
    with pytest.raises(TooSmall):
        f3_counterexample_graph(9)


def test_verify_f3_counterexample():
    assert verify_f3_counterexample(10).kind == EXHAUSTION
    assert verify_f3_counterexample(10, r=4).kind == WITNESS
    assert verify_f3_counterexample(11).kind == EXHAUSTION


def k4_bridge_k2():
    return Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)])


def test_large_prime_examples():
    g = k4_bridge_k2()
    A = large_prime_construction(g, 4, 1009, seed=0)
    assert pattern_matches(A, g) and rank(A) == 3
    # clique already occupies 0..3; the trailing block starts at the last clique vertex
    assert schur_complement(A, 3) == FMatrix.zeros(A.field, 3)


def test_large_prime_first_draw_success_rate():
    ok = 0
    for seed in range(100):
        n = 5 + seed % 6
        k = 4 + seed % (n - 4)
        g = random_graph_with_clique(n, k, seed)
        try:
            A = large_prime_construction(g, k, 1009, seed=seed, max_tries=1)
        except RetriesExhausted:
            continue
        assert rank(A) == n - k + 1
        ok += 1
    assert ok >= 99


def test_large_prime_errors():
    with pytest.raises(ValueError):
        large_prime_construction(k4_bridge_k2(), 4, 1000)
    with pytest.raises(ValueError):
        large_prime_construction(k4_bridge_k2(), 4, 101)


def test_constructions_are_deterministic():
    rng = random.Random(0)
    for _ in range(5):
        g = random_graph_with_clique(9, 5, rng.randrange(10 ** 6))
        assert nonprime_construction(g, 5, F9) == nonprime_construction(g, 5, F9)
        assert large_prime_construction(g, 5, 1009, seed=3) == \
            large_prime_construction(g, 5, 1009, seed=3)
