"""Explicit low-rank matrices for graphs containing a large clique.

Every builder relabels the graph so that the clique comes first, builds
A = [[A11, A12], [A12^T, A22]] with A11 = J_k + A12 A22^{-1} A12^T (so the
Schur complement of A22 is a rank-one all-ones block, or zero), checks the
result against the graph pattern and its target rank, and permutes back.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import (
    FieldTooSmall,
    NoClique,
    NoFeasibleScalar,
    PrimeField,
    RetriesExhausted,
    TooSmall,
    VerificationFailed,
)
from .field import Field, is_prime, make_field
from .graph import (
    Graph,
    SplitMix64,
    find_clique,
    inverse_permutation,
    pattern_matches,
    relabel_clique_first,
)
from .linalg import FMatrix, Singular, det, inverse, rank

# --- helpers -----------------------------------------------------------------


def block_matrix(A11: FMatrix, A12: FMatrix, A22: FMatrix) -> FMatrix:
    rows = [r1 + r2 for r1, r2 in zip(A11.rows, A12.rows)]
    rows += [r1 + r2 for r1, r2 in zip(A12.T.rows, A22.rows)]
    return FMatrix(A11.field, tuple(rows))


def adjacency_block(g: Graph, head, tail, fs: Field, value=1) -> FMatrix:
    """|head| x |tail| block with ``value`` on edges and 0 elsewhere."""
    return FMatrix(fs, tuple(tuple(value if g.has_edge(u, v) else 0 for v in tail)
                             for u in head))


def _clique_of_size(g: Graph, k: int, clique=None):
    if clique is not None:
        clique = list(clique)
        if len(clique) != k or not g.is_clique(clique):
            raise NoClique(f"given vertices do not form a {k}-clique")
        return clique
    if g.clique is not None and len(g.clique) >= k:
        return list(g.clique[:k])
    found = find_clique(g, k)
    if found is None:
        raise NoClique(f"graph has no {k}-clique")
    return found


def _verify(A: FMatrix, g: Graph, exact=None, at_most=None):
    if not pattern_matches(A, g):
        raise VerificationFailed("constructed matrix does not match the graph pattern")
    rk = rank(A)
    if exact is not None and rk != exact:
        raise VerificationFailed(f"constructed matrix has rank {rk}, expected {exact}")
    if at_most is not None and rk > at_most:
        raise VerificationFailed(f"constructed matrix has rank {rk} > {at_most}")
    return rk


def _back(A: FMatrix, perm) -> FMatrix:
    return A.permuted(inverse_permutation(perm))


# --- non-prime fields ---------------------------------------------------------


def leading_minor_completion(h: Graph, p: int | Field) -> FMatrix:
    """B in S(F_p, H) with unit edge entries and every leading principal minor 1.

    det of the leading j x j block is affine in b_jj with slope equal to the
    previous leading minor, which is 1; so b_jj = 1 - det(block with b_jj = 0).
    """
    fs = p if isinstance(p, Field) else make_field(p)
    if h.n == 0:
        raise ValueError("empty vertex set")
    rows = [[1 if h.has_edge(i, j) else 0 for j in range(h.n)] for i in range(h.n)]
    for j in range(h.n):
        rows[j][j] = 0
        lead = FMatrix(fs, tuple(tuple(r[:j + 1]) for r in rows[:j + 1]))
        rows[j][j] = fs.sub(1, det(lead))
    B = FMatrix(fs, tuple(tuple(r) for r in rows))
    return B


def nonprime_blocks(g: Graph, k: int, fs: Field, beta: int | None = None):
    """Blocks for a graph whose vertices 0..k-1 form a clique (k >= 1, k < n)."""
    n = g.n
    head, tail = list(range(k)), list(range(k, n))
    B = leading_minor_completion(g.induced(tail), fs)   # entries in the prime subfield
    if beta is None:
        beta = next(x for x in fs.elements() if not fs.is_in_prime_subfield(x))
    A22 = B.scale(fs.inv(beta))
    A12 = adjacency_block(g, head, tail, fs)
    A11 = FMatrix.ones(fs, k) + (A12 @ inverse(B) @ A12.T).scale(beta)
    for i in range(k):
        for j in range(i + 1, k):
            if A11[i, j] == 0:
                raise VerificationFailed(f"A11[{i},{j}] vanished; beta must lie outside F_p")
    return A11, A12, A22, beta


def nonprime_construction(g: Graph, k: int, fs: Field, clique=None,
                          strict: bool = True) -> FMatrix:
    """A in S(F, G) of rank n - k + 1 over a non-prime finite field F.

    ``strict`` enforces 4 <= k <= n - 1 and n >= 5; the construction itself
    is valid for any 1 <= k < n.
    """
    if fs.is_prime_field:
        raise PrimeField(f"F_{fs.q} is a prime field")
    n = g.n
    if strict and not (n >= 5 and 4 <= k <= n - 1):
        raise ValueError(f"need n >= 5 and 4 <= k <= n-1, got n={n}, k={k}")
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    cl = _clique_of_size(g, k, clique)
    h, perm = relabel_clique_first(g, cl)
    A11, A12, A22, _ = nonprime_blocks(h, k, fs)
    A = block_matrix(A11, A12, A22)
    _verify(A, h, exact=n - k + 1)
    A = _back(A, perm)
    _verify(A, g, exact=n - k + 1)
    return A


# --- k = n - 3 ----------------------------------------------------------------

# Adjacency triple of a clique vertex to the three outside vertices -> alpha
# slots (1-based) for the nonzero positions, in position order.
PATTERN_SLOTS = {
    (0, 0, 0): (),
    (1, 0, 0): (1,),
    (0, 1, 0): (2,),
    (0, 0, 1): (3,),
    (1, 1, 0): (4, 5),
    (1, 0, 1): (6, 7),
    (0, 1, 1): (8, 9),
    (1, 1, 1): (10, 11, 12),
}


def _case_base(case: int, fs: Field) -> FMatrix:
    """B0 with A22 = s^{-1} B0 for the scalar s being scanned."""
    if case == 1:
        return FMatrix.identity(fs, 3)
    if case == 2:
        return FMatrix(fs, ((1, 0, 0), (0, 0, 1), (0, 1, 0)))
    if case == 3:
        return FMatrix(fs, ((0, 0, 1), (0, 1, 1), (1, 1, 0)))
    if case == 4:
        m1 = fs.neg(1)
        K = FMatrix(fs, ((m1, 1, 1), (1, m1, 1), (1, 1, m1)))
        return K.scale(fs.inv(fs.from_int(2)))
    raise ValueError(f"unknown case {case}")


def case_alphas(case: int, fs: Field) -> dict:
    """alpha_1..alpha_12; all 1 except the special choices needed over F_5."""
    alphas = {i: 1 for i in range(1, 13)}
    if fs.q == 5:
        m1 = fs.neg(1)
        if case == 3:
            alphas[7] = m1
        elif case == 4:
            for i in (5, 7, 9, 11):
                alphas[i] = m1
            alphas[12] = fs.from_int(2)
    return alphas


def _pattern_row(pattern, alphas):
    slots = iter(PATTERN_SLOTS[pattern])
    return tuple(alphas[next(slots)] if bit else 0 for bit in pattern)


def scalar_constraints(case: int, fs: Field, alphas=None) -> set:
    """Values c such that the scalar s must satisfy 1 + s c != 0 (and s != 0).

    c ranges over x B0^{-1} y^T for all pattern rows x, y (x = y included,
    since two clique vertices may share a pattern).
    """
    alphas = alphas or case_alphas(case, fs)
    Binv = inverse(_case_base(case, fs))
    rows = [_pattern_row(p, alphas) for p in PATTERN_SLOTS]
    out = set()
    for x in rows:
        xb = (FMatrix(fs, (x,)) @ Binv).rows[0]
        for y in rows:
            c = 0
            for a, b in zip(xb, y):
                c = fs.add(c, fs.mul(a, b))
            out.add(c)
    return out


def scan_scalar(case: int, fs: Field, alphas=None) -> int:
    """First nonzero s in element order with 1 + s c != 0 for every constraint c."""
    cs = scalar_constraints(case, fs, alphas)
    for s in fs.nonzero():
        if all(fs.add(1, fs.mul(s, c)) != 0 for c in cs):
            return s
    raise NoFeasibleScalar(f"no feasible scalar for case {case} over F_{fs.q}")


def classify_outside_triple(g: Graph, outside):
    """(case, reordered outside vertices) for the three non-clique vertices.

    Case 1: no edges among them.  Case 2: one edge, reordered so it is
    between positions 2 and 3.  Case 3: two edges, reordered so the missing
    one is between positions 1 and 2.  Case 4: a triangle.
    """
    a, b, c = outside
    pairs = [(a, b), (a, c), (b, c)]
    present = [pr for pr in pairs if g.has_edge(*pr)]
    if len(present) == 0:
        return 1, [a, b, c]
    if len(present) == 1:
        u, v = present[0]
        w = next(x for x in outside if x not in (u, v))
        return 2, [w, u, v]
    if len(present) == 2:
        u, v = next(pr for pr in pairs if not g.has_edge(*pr))
        w = next(x for x in outside if x not in (u, v))
        return 3, [u, v, w]
    return 4, [a, b, c]


@dataclass
class KMinus3Construction:
    matrix: FMatrix
    case: int | None
    scalar: int | None
    alphas: dict = dc_field(default_factory=dict)
    delegated: bool = False
    profile: dict = dc_field(default_factory=dict)


def column_pattern_profile(g: Graph, clique, outside) -> dict:
    """How many clique vertices have each adjacency triple to ``outside``."""
    counts = {p: 0 for p in PATTERN_SLOTS}
    for v in clique:
        counts[tuple(int(g.has_edge(v, u)) for u in outside)] += 1
    return counts


def k_n_minus_3_details(g: Graph, fs: Field, clique=None) -> KMinus3Construction:
    n = g.n
    if fs.q <= 3:
        raise FieldTooSmall(f"needs |F| > 3, got {fs.q}")
    if n < 5:
        raise TooSmall(f"needs n >= 5, got {n}")
    k = n - 3
    cl = _clique_of_size(g, k, clique)
    if fs.p == 2:
        h, perm = relabel_clique_first(g, cl)
        A11, A12, A22, beta = nonprime_blocks(h, k, fs)
        A = _back(block_matrix(A11, A12, A22), perm)
        _verify(A, g, at_most=4)
        return KMinus3Construction(A, None, beta, delegated=True)
    outside = [v for v in range(n) if v not in set(cl)]
    case, outside = classify_outside_triple(g, outside)
    perm = list(cl) + outside
    h = g.permuted(perm)
    head, tail = list(range(k)), [k, k + 1, k + 2]
    alphas = case_alphas(case, fs)
    s = scan_scalar(case, fs, alphas)
    B0 = _case_base(case, fs)
    A22 = B0.scale(fs.inv(s))
    A12 = FMatrix(fs, tuple(_pattern_row(tuple(int(h.has_edge(v, u)) for u in tail), alphas)
                            for v in head))
    A11 = FMatrix.ones(fs, k) + A12 @ inverse(A22) @ A12.T
    A = block_matrix(A11, A12, A22)
    _verify(A, h, at_most=4)
    A = _back(A, perm)
    _verify(A, g, at_most=4)
    profile = column_pattern_profile(h, head, tail)
    return KMinus3Construction(A, case, s, alphas, profile=profile)


def k_n_minus_3_construction(g: Graph, fs: Field, clique=None) -> FMatrix:
    """A in S(F, G) of rank <= 4 for a graph containing K_{n-3}, |F| > 3."""
    return k_n_minus_3_details(g, fs, clique).matrix


# --- the F_3 counterexample family --------------------------------------------


def f3_counterexample_graph(n: int) -> Graph:
    """Graph on n >= 10 vertices containing K_{n-2} with mr(F_3, G) > 3.

    Clique on 0..n-3; the last two vertices are adjacent to neither each
    other nor vertex n-3.  Clique vertex 0 sees neither of them, 1 and 2 see
    only n-2, 3 and 4 see only n-1, 5 and 6 see both, the rest see neither.
    """
    if n < 10:
        raise TooSmall(f"the family needs n >= 10, got {n}")
    u, v = n - 2, n - 1
    edges = [(i, j) for i in range(n - 2) for j in range(i + 1, n - 2)]
    edges += [(1, u), (2, u), (3, v), (4, v), (5, u), (5, v), (6, u), (6, v)]
    return Graph.from_edges(n, edges, clique=range(n - 2))


def verify_f3_counterexample(n: int = 10, r: int = 3, max_n: int = 12, **search_kw):
    """Run the complete rank <= r search over F_3 on the family graph."""
    from .minrank import rank_le_search
    if n > max_n:
        raise TooSmall(f"n={n} exceeds the search guard {max_n}")
    g = f3_counterexample_graph(n)
    return rank_le_search(g, make_field(3), r, **search_kw)


# --- randomized analogue over a large prime field ----------------------------


def large_prime_construction(g: Graph, k: int, p: int = 1009, seed: int = 0,
                             max_tries: int = 200, clique=None) -> FMatrix:
    """Random A in S(F_p, G) of rank n - k + 1 (p a large prime).

    The trailing block covers one clique vertex plus the non-clique vertices,
    so it is (n - k + 1) square; the leading block is A12 A22^{-1} A12^T,
    making the Schur complement zero.  Draws are retried until A22 is
    invertible and every off-diagonal of the leading block is nonzero.
    """
    if not is_prime(p) or p < 1009:
        raise ValueError(f"p must be a prime >= 1009, got {p}")
    n = g.n
    if not 4 <= k < n:
        raise ValueError(f"need 4 <= k < n, got k={k}, n={n}")
    fs = make_field(p)
    cl = _clique_of_size(g, k, clique)
    h, perm = relabel_clique_first(g, cl)
    head, tail = list(range(k - 1)), list(range(k - 1, n))
    H = h.induced(tail)
    rng = SplitMix64(seed)
    nonzero = lambda: 1 + rng.below(p - 1)  # noqa: E731
    for _ in range(max_tries):
        m = len(tail)
        rows = [[0] * m for _ in range(m)]
        for i in range(m):
            rows[i][i] = rng.below(p)
            for j in range(i + 1, m):
                if H.has_edge(i, j):
                    rows[i][j] = rows[j][i] = nonzero()
        A22 = FMatrix(fs, tuple(tuple(r) for r in rows))
        try:
            A22inv = inverse(A22)
        except Singular:
            continue
        A12 = FMatrix(fs, tuple(tuple(nonzero() if h.has_edge(u, v) else 0 for v in tail)
                                for u in head))
        C = A12 @ A22inv @ A12.T
        if any(C[i, j] == 0 for i in range(k - 1) for j in range(i + 1, k - 1)):
            continue
        A = block_matrix(C, A12, A22)
        _verify(A, h, exact=n - k + 1)
        A = _back(A, perm)
        _verify(A, g, exact=n - k + 1)
        return A
    raise RetriesExhausted(f"no valid draw in {max_tries} tries over F_{p}")


# --- instance generators -------------------------------------------------------


def random_graph_with_clique(n: int, k: int, seed: int, shuffle: bool = True) -> Graph:
    """G(n, 1/2) with a planted k-clique on seeded random vertices."""
    rng = SplitMix64(seed)
    verts = list(range(n))
    if shuffle:
        for i in range(n - 1, 0, -1):
            j = rng.below(i + 1)
            verts[i], verts[j] = verts[j], verts[i]
    cl = set(verts[:k])
    edges = []
    for j in range(n):
        for i in range(j):
            if (i in cl and j in cl) or rng.next() >> 63:
                edges.append((i, j))
    return Graph.from_edges(n, edges, clique=sorted(cl))


def k_n_minus_3_instance(n: int, case: int, seed: int, shuffle: bool = True) -> Graph:
    """Graph with a K_{n-3} whose three outside vertices realise ``case``.

    The outside-edge configuration is drawn among those of the case, so
    Cases 2 and 3 appear in every position.
    """
    rng = SplitMix64(seed)
    k = n - 3
    outside_pairs = [(k, k + 1), (k, k + 2), (k + 1, k + 2)]
    options = {1: [()], 4: [tuple(outside_pairs)]}
    options[2] = [(pr,) for pr in outside_pairs]
    options[3] = [tuple(x for x in outside_pairs if x != pr) for pr in outside_pairs]
    chosen = options[case][rng.below(len(options[case]))]
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    edges += list(chosen)
    for v in range(k):
        for u in range(k, n):
            if rng.next() >> 63:
                edges.append((v, u))
    g = Graph.from_edges(n, edges)
    perm = list(range(n))
    if shuffle:
        for i in range(n - 1, 0, -1):
            j = rng.below(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
    g = g.permuted(perm)
    inv = inverse_permutation(perm)
    return g.with_clique(sorted(inv[v] for v in range(k)))
