import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from gfminrank.errors import NotSymmetric, Singular, SingularTrailingBlock, ZeroScale
from gfminrank.field import make_field
from gfminrank.linalg import (
    ALTERNATING,
    GRAM,
    FMatrix,
    canonical_rank_forms,
    congruence_diag,
    det,
    direct_sum,
    f2_symmetric_decompose,
    h2,
    inverse,
    matrix,
    rank,
    rank_generic,
    reconstruct,
    schur_complement,
    symmetric_factor,
)

F2, F3, F4, F5 = make_field(2), make_field(3), make_field(2, 2), make_field(5)


def random_symmetric(fs, n, rng):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rng.randrange(fs.q)
    return FMatrix.from_rows(fs, rows)


def all_symmetric(fs, n):
    pos = [(i, j) for i in range(n) for j in range(i, n)]
    for vals in itertools.product(range(fs.q), repeat=len(pos)):
        rows = [[0] * n for _ in range(n)]
        for (i, j), x in zip(pos, vals):
            rows[i][j] = rows[j][i] = x
        yield FMatrix.from_rows(fs, rows)


def test_rank_examples():
    assert rank(h2(F2)) == 2
    assert rank(FMatrix.ones(F3, 4)) == 1
    assert rank(FMatrix.zeros(F5, 3)) == 0


def test_inverse_examples():
    assert inverse(matrix([[1, 0], [0, 2]], 3)) == matrix([[1, 0], [0, 2]], 3)
    N = matrix([[0, 0, 1], [0, 1, 1], [1, 1, 0]], 5)
    assert inverse(N) == matrix([[1, -1, 1], [-1, 1, 0], [1, 0, 0]], 5)
    # (1/2) K over F_5, with 1/2 = 3
    K = matrix([[-1, 1, 1], [1, -1, 1], [1, 1, -1]], 5).scale(3)
    assert inverse(K) == matrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]], 5)
    with pytest.raises(Singular):
        inverse(FMatrix.ones(F3, 2))


def test_inverse_over_extension_field():
    rng = random.Random(3)
    F9 = make_field(3, 2)
    for _ in range(20):
        M = FMatrix.from_rows(F9, [[rng.randrange(9) for _ in range(4)] for _ in range(4)])
        if rank(M) == 4:
            assert M @ inverse(M) == FMatrix.identity(F9, 4)
            assert det(M) != 0
        else:
            assert det(M) == 0


def test_schur_complement_examples():
    assert schur_complement(matrix([[1, 1], [1, 1]], 3), 1) == FMatrix.zeros(F3, 1)
    A11 = matrix([[1, 2], [2, 0]], 3)
    A22 = matrix([[2]], 3)
    assert schur_complement(direct_sum(A11, A22), 2) == A11
    with pytest.raises(SingularTrailingBlock):
        schur_complement(direct_sum(A11, FMatrix.zeros(F3, 1)), 2)
    with pytest.raises(NotSymmetric):
        schur_complement(matrix([[1, 1], [0, 1]], 3), 1)


@pytest.mark.parametrize("fs", [F3, F5])
def test_schur_rank_identity(fs):
    rng = random.Random(fs.q)
    done = 0
    while done < 60:
        n = rng.randrange(2, 7)
        k = rng.randrange(1, n)
        A = random_symmetric(fs, n, rng)
        A22 = A.submatrix(range(k, n), range(k, n))
        if rank(A22) < n - k:
            continue
        assert rank(A) == rank(A22) + rank(schur_complement(A, k))
        done += 1


def test_congruence_diag():
    A = matrix([[0, 2], [2, 0]], 3)
    assert congruence_diag(A, [1, 2]) == matrix([[0, 1], [1, 0]], 3)
    assert congruence_diag(A, [1, 1]) == A
    with pytest.raises(ZeroScale):
        congruence_diag(A, [1, 0])


def test_congruence_preserves_rank_random():
    rng = random.Random(0)
    for _ in range(100):
        A = random_symmetric(F5, 6, rng)
        d = [rng.randrange(1, 5) for _ in range(6)]
        assert rank(congruence_diag(A, d)) == rank(A)


@pytest.mark.parametrize("fs", [F2, F3, F4])
def test_congruence_invariance_exhaustive(fs):
    for n in (1, 2, 3):
        scalings = list(itertools.product(range(1, fs.q), repeat=n))
        for A in all_symmetric(fs, n):
            r = rank(A)
            for d in scalings:
                B = congruence_diag(A, d)
                assert rank(B) == r
                assert all((A[i, j] == 0) == (B[i, j] == 0) for i in range(n) for j in range(n))


def test_f2_decompose_examples():
    form, X = f2_symmetric_decompose(h2(F2))
    assert form == ALTERNATING and X == FMatrix.identity(F2, 2)
    form, X = f2_symmetric_decompose(matrix([[1]], 2))
    assert form == GRAM and X == matrix([[1]], 2)
    with pytest.raises(NotSymmetric):
        f2_symmetric_decompose(matrix([[0, 1], [0, 0]], 2))


def test_f2_decompose_round_trip_all_4x4():
    count = 0
    for A in all_symmetric(F2, 4):
        form, X = f2_symmetric_decompose(A)
        r = rank(A)
        S = FMatrix.identity(F2, r) if form == GRAM else direct_sum(*[h2(F2)] * (r // 2))
        assert reconstruct(X, S) == A
        assert X.ncols == r and rank(X) == r
        count += 1
    assert count == 2 ** 10


def test_canonical_forms_lists():
    assert canonical_rank_forms(F2, 2) == (FMatrix.identity(F2, 2), h2(F2))
    assert canonical_rank_forms(F2, 3) == (FMatrix.identity(F2, 3),)
    assert canonical_rank_forms(F3, 3) == (FMatrix.identity(F3, 3),
                                           FMatrix.diag(F3, [1, 1, 2]))
    for fs in (F2, F3, F5):
        (empty,) = canonical_rank_forms(fs, 0)
        assert empty.shape == (0, 0)


@pytest.mark.parametrize("fs", [F3, F4, F5, make_field(3, 2)])
def test_symmetric_factor_round_trip(fs):
    if fs.q <= 5:   # every 3 x 3 symmetric matrix; F_9 only gets the random sample
        for A in all_symmetric(fs, 3):
            S, X = symmetric_factor(A)
            assert S in canonical_rank_forms(fs, rank(A))
            assert reconstruct(X, S) == A
    rng = random.Random(fs.q)
    for _ in range(40):
        A = random_symmetric(fs, 6, rng)
        S, X = symmetric_factor(A)
        assert S in canonical_rank_forms(fs, rank(A))
        assert reconstruct(X, S) == A


def test_odd_forms_are_inequivalent_over_f5():
    # the images of I_r and diag(1,..,eps) under X S X^T, X invertible, are disjoint (r <= 2)
    for r in (1, 2):
        I, D = canonical_rank_forms(F5, r)
        imgs = []
        for S in (I, D):
            seen = set()
            for vals in itertools.product(range(5), repeat=r * r):
                X = FMatrix.from_rows(F5, [vals[i * r:(i + 1) * r] for i in range(r)])
                if rank(X) == r:
                    seen.add((X @ S @ X.T).rows)
            imgs.append(seen)
        assert not imgs[0] & imgs[1]


def test_packed_f2_rank_agrees_with_generic():
    rng = random.Random(7)
    for _ in range(200):
        n, m = rng.randrange(1, 40), rng.randrange(1, 40)
        M = FMatrix.from_rows(F2, [[rng.randrange(2) for _ in range(m)] for _ in range(n)])
        assert rank(M) == rank_generic(M)


def test_text_round_trip():
    A = matrix([[1, 2, 3], [2, 0, 1], [3, 1, 2]], "2^2")
    text = A.to_text()
    assert text.splitlines()[0] == "3 3 4"
    assert FMatrix.from_text(text) == A


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([F2, F3, F4, F5]), st.integers(1, 6), st.randoms(use_true_random=False))
def test_rank_invariant_under_transpose_and_permutation(fs, n, rnd):
    A = FMatrix.from_rows(fs, [[rnd.randrange(fs.q) for _ in range(n)] for _ in range(n)])
    perm = list(range(n))
    rnd.shuffle(perm)
    assert rank(A) == rank(A.T) == rank(A.permuted(perm))


def test_canonical_forms_complete_and_disjoint_over_f5():
    from gfminrank.checks import check_canonical_forms
    res = check_canonical_forms(max_n=3, fields=(5,), image_max_n=2, budget=120.0)
    assert res.passed, res.detail
