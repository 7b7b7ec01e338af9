"""Minimum-rank solvers.

Three independent routes to mr(F, G):

* :func:`exhaustive_minrank` enumerates the pattern class directly (numpy
  batched elimination), optionally modulo diagonal congruence.
* :func:`f2_minrank` handles F_2, where every edge entry is forced to 1 and
  only the diagonal is free; branch and bound over the diagonal bits.
* :func:`rank_le_search` decides "some A in S(F, G) has rank <= r" by
  backtracking over factorizations A = X S X^T, S a canonical form.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .errors import SearchSpaceTooLarge, TooLarge, VerificationFailed
from .field import Field
from .graph import Graph, find_clique, pattern_matches
from .linalg import FMatrix, canonical_rank_forms, rank

log = logging.getLogger(__name__)

WITNESS = "WITNESS"
EXHAUSTION = "EXHAUSTION"

EXHAUSTIVE = "EXHAUSTIVE"
F2_DIAGONAL = "F2-DIAGONAL"
CERTIFICATE_SEARCH = "CERTIFICATE-SEARCH"

DEFAULT_LIMIT = 10 ** 8
F2_MAX_N = 24
MAX_POINTS = 8192


@dataclass
class RankCertificate:
    kind: str
    r: int
    field: Field
    X: FMatrix | None = None
    S: FMatrix | None = None
    form_index: int | None = None
    A: FMatrix | None = None
    nodes: int = 0
    forms_tried: int = 0

    @property
    def is_witness(self):
        return self.kind == WITNESS

    def to_dict(self):
        d = {"kind": self.kind, "r": self.r, "q": self.field.q, "nodes": self.nodes,
             "forms_tried": self.forms_tried}
        if self.kind == WITNESS:
            d["form_index"] = self.form_index
            d["X"] = self.X.tolist() if self.X is not None else None
            d["S"] = self.S.tolist() if self.S is not None else None
            d["A"] = self.A.tolist()
        return d


@dataclass
class MinRankResult:
    mr: int
    certificate: RankCertificate
    method: str
    lower: RankCertificate | None = None
    nodes: int = 0
    extra: dict = dc_field(default_factory=dict)

    @property
    def witness(self) -> FMatrix:
        return self.certificate.A

    def to_dict(self):
        d = {"mr": self.mr, "method": self.method, "nodes": self.nodes,
             "witness": self.certificate.to_dict()}
        if self.lower is not None:
            d["lower_bound"] = self.lower.to_dict()
        d.update(self.extra)
        return d


def _check_witness(A: FMatrix, g: Graph, r: int):
    if not pattern_matches(A, g):
        raise VerificationFailed("witness matrix does not match the graph pattern")
    if rank(A) > r:
        raise VerificationFailed(f"witness has rank {rank(A)} > {r}")


# --- exhaustive oracle -------------------------------------------------------

@lru_cache(maxsize=None)
def _np_tables(fs: Field):
    q = fs.q
    mul = np.array([[fs.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int32)
    sub = np.array([[fs.sub(a, b) for b in range(q)] for a in range(q)], dtype=np.int32)
    add = np.array([[fs.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int32)
    inv = np.array([0] + [fs.inv(a) for a in range(1, q)], dtype=np.int32)
    return add, sub, mul, inv


def batch_rank(arr: np.ndarray, fs: Field) -> np.ndarray:
    """Ranks of a stack of matrices, shape (N, rows, cols), entries as encodings."""
    _, SUB, MUL, INV = _np_tables(fs)
    A = np.array(arr, dtype=np.int32, copy=True)
    N, nr, nc = A.shape
    rk = np.zeros(N, dtype=np.int64)
    rows_idx = np.arange(nr)
    everyone = np.arange(N)
    for c in range(nc):
        cand = (A[:, :, c] != 0) & (rows_idx[None, :] >= rk[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = everyone[has]
        p = cand[has].argmax(axis=1)
        r = rk[has]
        rowp = A[sel, p].copy()
        A[sel, p] = A[sel, r]
        rowp = MUL[INV[rowp[:, c]][:, None], rowp]
        A[sel, r] = rowp
        f = np.where(rows_idx[None, :] > r[:, None], A[sel, :, c], 0)
        A[sel] = SUB[A[sel], MUL[f[:, :, None], rowp[:, None, :]]]
        rk[has] += 1
    return rk


def _spanning_forest(g: Graph):
    seen = [False] * g.n
    tree = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        stack = [root]
        while stack:
            u = stack.pop()
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    tree.append((min(u, v), max(u, v)))
                    stack.append(v)
    return set(tree)


def exhaustive_count(g: Graph, fs: Field, reduce: bool = False) -> int:
    free = g.num_edges - (len(_spanning_forest(g)) if reduce else 0)
    return (fs.q - 1) ** free * fs.q ** g.n


def exhaustive_minrank(g: Graph, fs: Field, reduce: bool = False,
                       limit: int = DEFAULT_LIMIT, chunk: int = 1 << 18) -> MinRankResult:
    """Minimum rank by enumerating every matrix in S(F, G).

    With ``reduce=True`` the edges of a spanning forest are fixed to 1, which
    enumerates one matrix per diagonal-congruence class of edge labellings;
    rank and pattern are invariant under that congruence.
    """
    n, q = g.n, fs.q
    total = exhaustive_count(g, fs, reduce)
    if total > limit:
        raise SearchSpaceTooLarge(f"{total} matrices exceed the limit {limit}")
    edges = g.edges()
    fixed = _spanning_forest(g) if reduce else set()
    free = [e for e in edges if e not in fixed]
    target = 1 if edges else 0
    best, best_mat = n + 1, None
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        A = np.zeros((len(idx), n, n), dtype=np.int32)
        rest = idx.copy()
        for i in range(n):
            A[:, i, i] = rest % q
            rest //= q
        for (i, j) in free:
            vals = rest % (q - 1) + 1
            rest //= q - 1
            A[:, i, j] = vals
            A[:, j, i] = vals
        for (i, j) in fixed:
            A[:, i, j] = 1
            A[:, j, i] = 1
        rk = batch_rank(A, fs) if n else np.zeros(len(idx), dtype=np.int64)
        k = int(rk.argmin())
        if rk[k] < best:
            best, best_mat = int(rk[k]), A[k]
        if best <= target:
            break
    W = FMatrix(fs, tuple(tuple(int(x) for x in row) for row in best_mat)) if n else \
        FMatrix(fs, ())
    _check_witness(W, g, best)
    cert = RankCertificate(WITNESS, best, fs, A=W)
    return MinRankResult(best, cert, EXHAUSTIVE, extra={"enumerated": total})


# --- F_2 diagonal branch and bound -------------------------------------------

def _reduce(v, basis):
    while v:
        h = v.bit_length() - 1
        b = basis.get(h)
        if b is None:
            return v
        v ^= b
    return 0


def _span_dim(vectors):
    basis = {}
    for v in vectors:
        v = _reduce(v, basis)
        if v:
            basis[v.bit_length() - 1] = v
    return len(basis)


def f2_minrank_bruteforce(g: Graph):
    """min over all 2^n diagonals of rank(A); plain enumeration, used as an oracle."""
    from .linalg import rank_f2_packed
    best, arg = g.n + 1, 0
    for d in range(1 << g.n):
        rk = rank_f2_packed([a | (d & (1 << i)) for i, a in enumerate(g.adj)])
        if rk < best:
            best, arg = rk, d
    return best, arg


def f2_minrank(g: Graph, fs: Field | None = None) -> MinRankResult:
    """mr(F_2, G): branch and bound over the 2^n diagonal assignments.

    Rows are inserted in order; row i depends only on its own diagonal bit.
    A node at depth i is pruned when rank(rows < i) plus a lower bound on the
    rows still to come reaches the incumbent.  The bound projects onto the
    first i columns, where every remaining row is already known.
    """
    from .field import make_field
    n = g.n
    if n > F2_MAX_N:
        raise TooLarge(f"f2_minrank supports n <= {F2_MAX_N}")
    fs = fs or make_field(2)
    adj = g.adj
    best = [n + 1, 0]
    nodes = [0]

    def bound(i, rows):
        mask = (1 << i) - 1
        proj_u = [r & mask for r in rows]
        du = _span_dim(proj_u)
        dall = _span_dim(proj_u + [adj[j] & mask for j in range(i, n)])
        return dall - du

    def dfs(i, basis, rows, cnt, diag):
        nodes[0] += 1
        if i == n:
            if cnt < best[0]:
                best[0], best[1] = cnt, diag
            return
        if cnt >= best[0] or cnt + bound(i, rows) >= best[0]:
            return
        base = adj[i]
        opts = []
        for b in (0, 1):
            v = base | (b << i)
            red = _reduce(v, basis)
            opts.append((1 if red else 0, b, v, red))
        opts.sort()
        for inc, b, v, red in opts:
            if cnt + inc >= best[0]:
                continue
            if red:
                basis[red.bit_length() - 1] = red
            rows.append(v)
            dfs(i + 1, basis, rows, cnt + inc, diag | (b << i))
            rows.pop()
            if red:
                del basis[red.bit_length() - 1]

    dfs(0, {}, [], 0, 0)
    mr, d = best
    A = FMatrix(fs, tuple(tuple(1 if (adj[i] >> j & 1) or (i == j and d >> i & 1) else 0
                                for j in range(n)) for i in range(n)))
    _check_witness(A, g, mr)
    cert = RankCertificate(WITNESS, mr, fs, A=A, nodes=nodes[0])
    return MinRankResult(mr, cert, F2_DIAGONAL, nodes=nodes[0])


# --- certificate search ------------------------------------------------------

class FormTables:
    """Projective points of F^r with the nonzero pattern of x S y^T.

    Point 0 is the zero vector; the others are nonzero vectors whose first
    nonzero coordinate is 1.  Scaling a row of X by a nonzero constant is a
    diagonal congruence of X S X^T, so these points cover every row up to
    pattern-preserving changes.
    """

    def __init__(self, fs: Field, S: FMatrix):
        self.fs = fs
        self.S = S
        r = self.r = S.nrows
        q = fs.q
        count = (q ** r - 1) // (q - 1) + 1 if r else 1
        if count > MAX_POINTS:
            raise SearchSpaceTooLarge(f"{count} projective points for r={r}, q={q}")
        pts = [(0,) * r]
        for lead in range(r):
            for tail in range(q ** (r - lead - 1)):
                v = [0] * r
                v[lead] = 1
                t = tail
                for k in range(r - 1, lead, -1):
                    v[k] = t % q
                    t //= q
                pts.append(tuple(v))
        self.points = pts
        self.index = {p: i for i, p in enumerate(pts)}
        P = len(pts)
        self.full = (1 << P) - 1
        if r == 0:
            self.nz = [0]
        else:
            _, _, MUL, _ = _np_tables(fs)
            ADD = _np_tables(fs)[0]
            Pm = np.array(pts, dtype=np.int32)
            Sm = np.array(S.rows, dtype=np.int32)
            W = np.zeros((P, r), dtype=np.int32)   # W = Pm S
            for k in range(r):
                for l in range(r):
                    W[:, l] = ADD[W[:, l], MUL[Pm[:, k], Sm[k, l]]]
            B = np.zeros((P, P), dtype=np.int32)
            for k in range(r):
                B = ADD[B, MUL[W[:, k][:, None], Pm[:, k][None, :]]]
            nzb = B != 0
            packed = np.packbits(nzb, axis=1, bitorder="little")
            self.nz = [int.from_bytes(row.tobytes(), "little") for row in packed]
        self.z = [self.full ^ m for m in self.nz]

    def normalize(self, v):
        fs = self.fs
        for x in v:
            if x:
                s = fs.inv(x)
                return tuple(fs.mul(s, y) for y in v)
        return tuple(v)

    def apply(self, v, g):
        fs = self.fs
        out = []
        for col in range(self.r):
            acc = 0
            for k in range(self.r):
                if v[k] and g[k][col]:
                    acc = fs.add(acc, fs.mul(v[k], g[k][col]))
            out.append(acc)
        return tuple(out)

    @property
    def orbit_representatives(self) -> int:
        """Bitmask of one point per orbit of a verified subgroup of the isometries of S."""
        if not hasattr(self, "_reps"):
            self._reps = self._compute_reps()
        return self._reps

    def isometry_generators(self, limit=40):
        fs, S, r = self.fs, self.S, self.r
        gens = []
        if r == 0:
            return gens
        Srows = S.rows

        def is_isometry(g):
            G = FMatrix(fs, g)
            return (G @ S @ G.T) == S

        def colvec(v):   # S v^T
            return [self._dot(Srows[i], v) for i in range(r)]

        for v in self.points[1:]:
            if len(gens) >= limit:
                break
            Q = self._dot(colvec(v), v)
            Sv = colvec(v)
            if fs.p != 2 and Q:
                c = fs.div(fs.from_int(2), Q)
                g = [[fs.sub(int(i == j), fs.mul(c, fs.mul(Sv[i], v[j]))) for j in range(r)]
                     for i in range(r)]
            elif fs.p == 2 and not Q:
                g = [[fs.add(int(i == j), fs.mul(Sv[i], v[j])) for j in range(r)]
                     for i in range(r)]
            else:
                continue
            if is_isometry(g):
                gens.append(tuple(tuple(x) for x in g))
        for i in range(r - 1):
            perm = [[int(j == (i + 1 if k == i else i if k == i + 1 else k)) for j in range(r)]
                    for k in range(r)]
            if is_isometry(perm):
                gens.append(tuple(tuple(x) for x in perm))
        return gens

    def _dot(self, a, b):
        fs = self.fs
        acc = 0
        for x, y in zip(a, b):
            if x and y:
                acc = fs.add(acc, fs.mul(x, y))
        return acc

    def _compute_reps(self):
        P = len(self.points)
        parent = list(range(P))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for g in self.isometry_generators():
            for i, v in enumerate(self.points):
                j = self.index[self.normalize(self.apply(v, g))]
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        reps = 0
        for i in range(P):
            if find(i) == i:
                reps |= 1 << i
        return reps


@lru_cache(maxsize=64)
def form_tables(fs: Field, r: int, form_index: int) -> FormTables:
    return FormTables(fs, canonical_rank_forms(fs, r)[form_index])


def search_order(g: Graph, clique=None):
    """Clique vertices first, then by most already-placed neighbours, ties by label."""
    if clique is None:
        clique = g.clique
    if clique is None:
        clique = []
        for k in range(g.n, 0, -1):
            c = find_clique(g, k)
            if c is not None:
                clique = c
                break
    order = list(clique)
    placed = set(order)
    while len(order) < g.n:
        best = max((v for v in range(g.n) if v not in placed),
                   key=lambda v: (sum(1 for u in order if g.has_edge(u, v)), -v))
        order.append(best)
        placed.add(best)
    return order


class _SearchBudget(Exception):
    pass


def _dfs(g: Graph, T: FormTables, order, first_choices, max_nodes):
    """Depth-first search; returns (assignment or None, nodes)."""
    n = g.n
    nz, z = T.nz, T.z
    later_adj = []
    for d, v in enumerate(order):
        later_adj.append([(w, g.has_edge(v, w)) for w in order[d + 1:]])
    assign = [0] * n
    nodes = 0

    def rec(depth, dom):
        nonlocal nodes
        if depth == n:
            return True
        v = order[depth]
        cand = dom[v]
        if depth == 0:
            cand &= first_choices
        while cand:
            low = cand & -cand
            a = low.bit_length() - 1
            cand ^= low
            nodes += 1
            if nodes > max_nodes:
                raise _SearchBudget
            nza, za = nz[a], z[a]
            new = dom[:]
            ok = True
            for w, is_edge in later_adj[depth]:
                m = new[w] & (nza if is_edge else za)
                if not m:
                    ok = False
                    break
                new[w] = m
            if not ok:
                continue
            assign[v] = a
            if rec(depth + 1, new):
                return True
        return False

    dom0 = [T.full] * n
    if n == 0:
        return [], 0
    found = rec(0, dom0)
    return (list(assign) if found else None), nodes


def _subtree_task(args):
    g, fs, r, form_index, order, choice, max_nodes = args
    T = form_tables(fs, r, form_index)
    return _dfs(g, T, order, choice, max_nodes)


def rank_le_search(g: Graph, fs: Field, r: int, max_nodes: int = DEFAULT_LIMIT,
                   threads: int = 1, order=None) -> RankCertificate:
    """Decide whether some A in S(F, G) has rank <= r.

    Every symmetric A of rank <= r is X S X^T for an n x r matrix X (not
    necessarily of full rank) and some canonical form S of rank r.  Rows of X
    are assigned vertex by vertex and pruned by forward checking on the
    constraint "x_i S x_j^T != 0 exactly when ij is an edge".  The first row
    is restricted to orbit representatives under isometries of S.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    if order is None:
        order = search_order(g)
    forms = canonical_rank_forms(fs, r)
    total_nodes = 0
    for fi, S in enumerate(forms):
        T = form_tables(fs, r, fi)
        reps = T.orbit_representatives
        budget = max_nodes - total_nodes
        try:
            if threads > 1 and g.n > 0:
                assign, nodes = _parallel_search(g, fs, r, fi, order, reps, budget, threads)
            else:
                assign, nodes = _dfs(g, T, order, reps, budget)
        except _SearchBudget:
            raise SearchSpaceTooLarge(f"search exceeded {max_nodes} nodes at r={r}") from None
        total_nodes += nodes
        if assign is not None:
            X = FMatrix(fs, tuple(T.points[a] for a in assign)) if r else \
                FMatrix(fs, tuple(() for _ in range(g.n)))
            A = (X @ S @ X.T) if r else FMatrix.zeros(fs, g.n)
            _check_witness(A, g, r)
            return RankCertificate(WITNESS, r, fs, X=X, S=S, form_index=fi, A=A,
                                   nodes=total_nodes, forms_tried=fi + 1)
    return RankCertificate(EXHAUSTION, r, fs, nodes=total_nodes, forms_tried=len(forms))


def _parallel_search(g, fs, r, fi, order, reps, budget, threads):
    """Split at depth 1 by first-row choice; merge in choice order."""
    choices = []
    m = reps
    while m:
        low = m & -m
        choices.append(low)
        m ^= low
    total = 0
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_subtree_task, (g, fs, r, fi, order, c, budget))
                   for c in choices]
        try:
            for fut in futures:
                assign, nodes = fut.result()
                total += nodes
                if total > budget:
                    raise _SearchBudget
                if assign is not None:
                    return assign, total
        finally:
            for fut in futures:
                fut.cancel()
    return None, total


def minrank(g: Graph, fs: Field, method: str = "auto", max_rank: int | None = None,
            cross_check: bool = False, max_nodes: int = DEFAULT_LIMIT,
            threads: int = 1) -> MinRankResult:
    """mr(F, G).

    ``method`` is "auto" (F_2 diagonal solver when q = 2 and n <= 24, else
    certificate search), "search", "f2" or "exhaustive".  With ``max_rank``
    the search stops after that rank and the result's mr is None when no
    witness was found.
    """
    if method == "auto":
        method = "f2" if fs.q == 2 and g.n <= F2_MAX_N else "search"
    if method == "f2":
        result = f2_minrank(g, fs)
    elif method == "exhaustive":
        result = exhaustive_minrank(g, fs, reduce=True, limit=max_nodes)
    elif method == "search":
        result = _search_minrank(g, fs, max_rank, max_nodes, threads)
    else:
        raise ValueError(f"unknown method {method!r}")
    if cross_check and result.mr is not None:
        try:
            ref = exhaustive_minrank(g, fs, reduce=True)
        except SearchSpaceTooLarge:
            log.warning("cross-check skipped: exhaustive search too large")
        else:
            if ref.mr != result.mr:
                raise VerificationFailed(f"{result.method} gives {result.mr}, "
                                         f"exhaustive gives {ref.mr}")
            result.extra["cross_check"] = "agree"
    return result


def _search_minrank(g, fs, max_rank, max_nodes, threads):
    order = search_order(g)
    top = g.n if max_rank is None else min(max_rank, g.n)
    lower = None
    nodes = 0
    for r in range(0, top + 1):
        cert = rank_le_search(g, fs, r, max_nodes=max_nodes - nodes, threads=threads,
                              order=order)
        nodes += cert.nodes
        if cert.is_witness:
            return MinRankResult(r, cert, CERTIFICATE_SEARCH, lower=lower, nodes=nodes)
        lower = cert
    return MinRankResult(None, lower, CERTIFICATE_SEARCH, lower=lower, nodes=nodes)
