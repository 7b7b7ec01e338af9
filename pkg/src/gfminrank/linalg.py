"""Dense exact linear algebra over a finite field.

Matrices are immutable row-major tuples of element encodings.  Over F_2 a
word-parallel path packs each row into a Python int and eliminates with XOR.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    DimensionMismatch,
    LinalgError,
    NotSymmetric,
    Singular,
    SingularTrailingBlock,
    ZeroScale,
)
from .field import Field, make_field

# Matrices with at least this many columns over F_2 use the packed kernel.
F2_PACKED_MIN_COLS = 1

GRAM = "GRAM"
ALTERNATING = "ALTERNATING-BLOCK"


@dataclass(frozen=True)
class FMatrix:
    field: Field
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise DimensionMismatch("ragged rows")
        q = self.field.q
        for r in rows:
            for x in r:
                if not 0 <= x < q:
                    raise LinalgError(f"entry {x} outside F_{q}")
        object.__setattr__(self, "rows", rows)

    # construction
    @classmethod
    def from_rows(cls, field, rows):
        return cls(field, tuple(tuple(r) for r in rows))

    @classmethod
    def zeros(cls, field, nrows, ncols=None):
        ncols = nrows if ncols is None else ncols
        return cls(field, tuple((0,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, field, n):
        return cls(field, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def ones(cls, field, nrows, ncols=None):
        ncols = nrows if ncols is None else ncols
        return cls(field, tuple((1,) * ncols for _ in range(nrows)))

    @classmethod
    def diag(cls, field, values):
        n = len(values)
        return cls(field, tuple(tuple(values[i] if i == j else 0 for j in range(n))
                                for i in range(n)))

    # shape and access
    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def tolist(self):
        return [list(r) for r in self.rows]

    @property
    def T(self):
        return FMatrix(self.field, tuple(zip(*self.rows)) if self.rows else ())

    def is_square(self):
        return self.nrows == self.ncols

    def is_symmetric(self):
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.nrows) for j in range(i + 1, self.nrows))

    def submatrix(self, rows, cols):
        return FMatrix(self.field, tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def permuted(self, perm):
        """Symmetric permutation: entry (i, j) of the result is self[perm[i], perm[j]]."""
        return self.submatrix(perm, perm)

    # arithmetic
    def _check_same(self, other):
        if self.field != other.field:
            raise DimensionMismatch("matrices over different fields")
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        add = self.field.add
        return FMatrix(self.field, tuple(tuple(add(a, b) for a, b in zip(r, s))
                                         for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other):
        self._check_same(other)
        sub = self.field.sub
        return FMatrix(self.field, tuple(tuple(sub(a, b) for a, b in zip(r, s))
                                         for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        neg = self.field.neg
        return FMatrix(self.field, tuple(tuple(neg(a) for a in r) for r in self.rows))

    def scale(self, c):
        mul = self.field.mul
        return FMatrix(self.field, tuple(tuple(mul(c, a) for a in r) for r in self.rows))

    def __matmul__(self, other):
        if self.field != other.field:
            raise DimensionMismatch("matrices over different fields")
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        fs = self.field
        cols = list(zip(*other.rows)) if other.rows else [()] * 0
        if not cols:
            return FMatrix(fs, tuple(() for _ in self.rows)) if self.rows else FMatrix(fs, ())
        if fs.m == 1:
            p = fs.p
            return FMatrix(fs, tuple(
                tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in self.rows))
        add, mul = fs.add, fs.mul
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = 0
                for a, b in zip(r, c):
                    if a and b:
                        acc = add(acc, mul(a, b))
                row.append(acc)
            out.append(tuple(row))
        return FMatrix(fs, tuple(out))

    # text format: "rows cols q" then one line per row
    def to_text(self) -> str:
        lines = [f"{self.nrows} {self.ncols} {self.field.q}"]
        lines.extend(" ".join(str(x) for x in r) for r in self.rows)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, field: Field | None = None):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        nrows, ncols, q = (int(t) for t in lines[0].split())
        if field is None:
            from .field import parse_field
            field = parse_field(q)
        elif field.q != q:
            raise DimensionMismatch(f"text declares q={q}, field has q={field.q}")
        rows = [tuple(int(t) for t in ln.split()) for ln in lines[1:1 + nrows]]
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise DimensionMismatch("matrix text does not match its header")
        return cls(field, tuple(rows))

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class BlockSplit:
    """Leading block of size ``head`` and a trailing block of size n - head."""
    head: int
    n: int

    def __post_init__(self):
        if not 1 <= self.head < self.n:
            raise LinalgError(f"block split needs 1 <= k < n, got k={self.head}, n={self.n}")

    @property
    def tail(self):
        return self.n - self.head

    def blocks(self, A: FMatrix):
        k, n = self.head, self.n
        lead, trail = range(k), range(k, n)
        return (A.submatrix(lead, lead), A.submatrix(lead, trail),
                A.submatrix(trail, lead), A.submatrix(trail, trail))


# --- elimination -------------------------------------------------------------

def pack_rows_f2(M: FMatrix):
    """Rows of an F_2 matrix as ints; bit j holds column j."""
    return [sum(1 << j for j, x in enumerate(r) if x) for r in M.rows]


def rank_f2_packed(rows) -> int:
    """Rank of packed F_2 rows (ints)."""
    pivots = {}
    rank = 0
    for v in rows:
        while v:
            h = v.bit_length() - 1
            b = pivots.get(h)
            if b is None:
                pivots[h] = v
                rank += 1
                break
            v ^= b
    return rank


def _echelon(M: FMatrix):
    """Reduced row echelon form; returns (rows, pivot columns).

    Pivot choice is the first nonzero entry in column order; pivot rows are
    normalised to 1.
    """
    fs = M.field
    rows = [list(r) for r in M.rows]
    nr, nc = M.nrows, M.ncols
    mul, sub, inv = fs.mul, fs.sub, fs.inv
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = inv(rows[r][c])
        if s != 1:
            rows[r] = [mul(s, x) for x in rows[r]]
        pr = rows[r]
        for i in range(nr):
            f = rows[i][c]
            if i != r and f:
                rows[i] = [sub(x, mul(f, y)) if y else x for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return rows, pivots


def rank_generic(M: FMatrix) -> int:
    return len(_echelon(M)[1])


def rank(M: FMatrix) -> int:
    """Row rank over the matrix's field."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if M.field.q == 2 and M.ncols >= F2_PACKED_MIN_COLS:
        return rank_f2_packed(pack_rows_f2(M))
    return rank_generic(M)


def det(M: FMatrix) -> int:
    if not M.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    fs = M.field
    rows = [list(r) for r in M.rows]
    n = M.nrows
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = fs.neg(d)
        d = fs.mul(d, rows[c][c])
        s = fs.inv(rows[c][c])
        for i in range(c + 1, n):
            f = fs.mul(rows[i][c], s)
            if f:
                rows[i] = [fs.sub(x, fs.mul(f, y)) for x, y in zip(rows[i], rows[c])]
    return d


def inverse(M: FMatrix) -> FMatrix:
    if not M.is_square():
        raise DimensionMismatch("inverse of a non-square matrix")
    n = M.nrows
    fs = M.field
    aug = FMatrix(fs, tuple(r + tuple(int(i == j) for j in range(n))
                            for i, r in enumerate(M.rows)))
    rows, pivots = _echelon(aug)
    if [c for c in pivots if c < n] != list(range(n)):
        raise Singular("matrix is singular")
    return FMatrix(fs, tuple(tuple(r[n:]) for r in rows))


def schur_complement(A: FMatrix, split: BlockSplit | int) -> FMatrix:
    """A11 - A12 A22^{-1} A21 for the leading/trailing partition."""
    if isinstance(split, int):
        split = BlockSplit(split, A.nrows)
    if not A.is_symmetric():
        raise NotSymmetric("Schur complement expects a symmetric matrix")
    A11, A12, A21, A22 = split.blocks(A)
    try:
        A22inv = inverse(A22)
    except Singular as exc:
        raise SingularTrailingBlock("trailing block is singular") from exc
    return A11 - A12 @ A22inv @ A21


def congruence_diag(A: FMatrix, d) -> FMatrix:
    """D^T A D for D = diag(d); entry (i, j) becomes d_i d_j a_ij."""
    if len(d) != A.nrows or not A.is_square():
        raise DimensionMismatch("scale vector length must match the square matrix")
    if any(x == 0 for x in d):
        raise ZeroScale("congruence by a singular diagonal")
    mul = A.field.mul
    return FMatrix(A.field, tuple(
        tuple(mul(mul(d[i], d[j]), a) for j, a in enumerate(r)) for i, r in enumerate(A.rows)))


def direct_sum(*blocks: FMatrix) -> FMatrix:
    fs = blocks[0].field
    n = sum(b.nrows for b in blocks)
    rows = []
    off = 0
    for b in blocks:
        for r in b.rows:
            rows.append((0,) * off + r + (0,) * (n - off - b.ncols))
        off += b.ncols
    return FMatrix(fs, tuple(rows))


def h2(fs: Field) -> FMatrix:
    return FMatrix(fs, ((0, 1), (1, 0)))


# --- canonical congruence forms ---------------------------------------------

@lru_cache(maxsize=None)
def canonical_rank_forms(fs: Field, r: int) -> tuple:
    """Congruence-class representatives for invertible symmetric r x r forms.

    Characteristic 2: the identity, plus the sum of H_2 blocks when r is even.
    Odd characteristic: the identity and diag(1, ..., 1, eps) with eps the
    smallest non-square.
    """
    if r == 0:
        return (FMatrix(fs, ()),)
    forms = [FMatrix.identity(fs, r)]
    if fs.p == 2:
        if r % 2 == 0:
            forms.append(direct_sum(*[h2(fs)] * (r // 2)))
    else:
        forms.append(FMatrix.diag(fs, [1] * (r - 1) + [fs.nonsquare]))
    return tuple(forms)


def _sum_of_two_squares(fs: Field, target: int):
    """(a, b) with a^2 + b^2 = target; exists in every finite field."""
    sq = {}
    for x in range(fs.q):
        sq.setdefault(fs.mul(x, x), x)
    for s, a in sq.items():
        b2 = fs.sub(target, s)
        if b2 in sq:
            return a, sq[b2]
    raise LinalgError("no two-square representation")  # unreachable for finite fields


def symmetric_factor(A: FMatrix):
    """Factor a symmetric A as X S X^T with S from :func:`canonical_rank_forms`.

    Returns ``(S, X)`` where X has rank(A) columns and full column rank.
    """
    if not A.is_symmetric():
        raise NotSymmetric("matrix is not symmetric")
    fs = A.field
    n = A.nrows
    add, sub, mul, inv = fs.add, fs.sub, fs.mul, fs.inv
    W = [list(r) for r in A.rows]
    singles = []   # (coefficient d, column c): contributes d c c^T
    pairs = []     # (u, w): contributes u w^T + w u^T  (char 2 only)

    def outer_sub(W, u, v, coef):
        # W -= coef * (u v^T)
        for i in range(n):
            if u[i]:
                cu = mul(coef, u[i])
                Wi = W[i]
                for j in range(n):
                    if v[j]:
                        Wi[j] = sub(Wi[j], mul(cu, v[j]))

    while True:
        i = next((i for i in range(n) if W[i][i]), None)
        if i is not None:
            d = W[i][i]
            c = [mul(W[k][i], inv(d)) for k in range(n)]
            singles.append((d, c))
            outer_sub(W, c, c, d)
            continue
        ij = next(((i, j) for i in range(n) for j in range(i + 1, n) if W[i][j]), None)
        if ij is None:
            break
        i, j = ij
        if fs.p != 2:
            # x = e_i + e_j has x^T W x = 2 w_ij != 0
            v = [add(W[k][i], W[k][j]) for k in range(n)]
            d = add(W[i][j], W[j][i])
            c = [mul(x, inv(d)) for x in v]
            singles.append((d, c))
            outer_sub(W, c, c, d)
        else:
            w = W[i][j]
            u = [mul(W[k][i], inv(w)) for k in range(n)]
            v = [W[k][j] for k in range(n)]
            pairs.append((u, v))
            outer_sub(W, u, v, 1)
            outer_sub(W, v, u, 1)

    cols = []
    if fs.p == 2:
        for d, c in singles:
            s = fs.sqrt(d)
            cols.append([mul(s, x) for x in c])
        if cols:
            # [v | u w] with form 1 + H_2 is congruent to I_3 via M M^T = diag(1, H_2)
            M = ((1, 1, 1), (1, 1, 0), (0, 1, 1))
            for u, w in pairs:
                trio = (cols.pop(), u, w)
                for jc in range(3):
                    cols.append([add(add(mul(trio[0][k], M[0][jc]), mul(trio[1][k], M[1][jc])),
                                     mul(trio[2][k], M[2][jc])) for k in range(n)])
            S_index = 0
        else:
            for u, w in pairs:
                # u w^T + w u^T is symmetric in (u, w); this order maps H_2 to X = I_2
                cols.extend([w, u])
            S_index = 1 if pairs else 0
    else:
        eps = fs.nonsquare
        eps_inv = inv(eps)
        plain, twisted = [], []
        for d, c in singles:
            if fs.is_square(d):
                s = fs.sqrt(d)
                plain.append([mul(s, x) for x in c])
            else:
                s = fs.sqrt(mul(d, eps_inv))
                twisted.append([mul(s, x) for x in c])
        if len(twisted) >= 2:
            # eps (c1 c1^T + c2 c2^T) = [c1 c2] N N^T [c1 c2]^T with N = [[a, -b], [b, a]]
            a, b = _sum_of_two_squares(fs, eps)
        while len(twisted) >= 2:
            c1, c2 = twisted.pop(), twisted.pop()
            plain.append([add(mul(a, x), mul(b, y)) for x, y in zip(c1, c2)])
            plain.append([sub(mul(a, y), mul(b, x)) for x, y in zip(c1, c2)])
        cols = plain + twisted
        S_index = 1 if twisted else 0

    k = len(cols)
    S = canonical_rank_forms(fs, k)[S_index]
    X = FMatrix(fs, tuple(tuple(cols[j][i] for j in range(k)) for i in range(n))) if k else \
        FMatrix(fs, tuple(() for _ in range(n)))
    return S, X


def form_kind(S: FMatrix) -> str:
    """GRAM for identity-type forms, ALTERNATING-BLOCK for sums of H_2."""
    if S.nrows and all(S[i, i] == 0 for i in range(S.nrows)):
        return ALTERNATING
    return GRAM


def f2_symmetric_decompose(A: FMatrix):
    """Split a symmetric F_2 matrix as X X^T or X (H_2 + ... + H_2) X^T.

    Returns ``(form, X)`` with form GRAM or ALTERNATING-BLOCK.  The alternating
    form is used exactly when A has zero diagonal and nonzero rank.
    """
    if A.field.q != 2:
        raise LinalgError("f2_symmetric_decompose works over F_2 only")
    S, X = symmetric_factor(A)
    return form_kind(S), X


def reconstruct(X: FMatrix, S: FMatrix) -> FMatrix:
    if X.ncols == 0:
        return FMatrix.zeros(X.field, X.nrows)
    return X @ S @ X.T


def matrix(rows, q=2) -> FMatrix:
    """Shorthand: build an FMatrix from nested lists over F_q (prime q or 'p^m')."""
    from .field import parse_field
    fs = q if isinstance(q, Field) else parse_field(q)
    return FMatrix.from_rows(fs, [[x % fs.q if fs.m == 1 else x for x in r] for r in rows])


__all__ = [
    "FMatrix", "BlockSplit", "rank", "rank_generic", "rank_f2_packed", "pack_rows_f2",
    "det", "inverse", "schur_complement", "congruence_diag", "canonical_rank_forms",
    "symmetric_factor", "f2_symmetric_decompose", "reconstruct", "direct_sum", "h2",
    "form_kind", "matrix", "make_field", "GRAM", "ALTERNATING",
]
