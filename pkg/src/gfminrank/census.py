"""Counting over F_2: group orders, the rank census of symmetric matrices,
their bounds, and the scaled average minimum rank alpha_n(F_2).

All comparisons are exact (ints and Fractions).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

from .errors import NonIntegralDivision, OddDimension, TooLarge
from .graph import enumerate_labeled_graphs, num_pairs, sample_graphs
from .linalg import rank_f2_packed

BRUTE_CENSUS_MAX_N = 5
ALPHA_EXACT_MAX_N = 6
MONTECARLO_MAX_N = 24


# --- closed forms ------------------------------------------------------------

def orth_constant(n: int) -> Fraction:
    """C(n) = prod_{i=1}^{floor((n-1)/2)} (1 - 4^-i), with C(1) = C(2) = 1."""
    c = Fraction(1)
    for i in range(1, (n - 1) // 2 + 1):
        c *= 1 - Fraction(1, 4 ** i)
    return c


def orth_order(n: int) -> int:
    """|O(n, F_2)| = C(n) 2^{n(n-1)/2}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v = orth_constant(n) * 2 ** (n * (n - 1) // 2)
    if v.denominator != 1:
        raise NonIntegralDivision(f"O({n}) is not integral: {v}")
    return v.numerator


def symplectic_order(dim: int) -> int:
    """|Sp(dim, F_2)| = O(dim + 1) for even dim."""
    if dim < 2 or dim % 2:
        raise OddDimension(f"symplectic dimension must be even and >= 2, got {dim}")
    return orth_order(dim + 1)


def n_rank_k_count(n: int, k: int) -> int:
    """Number of n x k matrices over F_2 of rank k."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    out = 1
    for i in range(k):
        out *= 2 ** n - 2 ** i
    return out


def _exact_div(a, b):
    q, r = divmod(a, b)
    if r:
        raise NonIntegralDivision(f"{a} / {b} leaves remainder {r}")
    return q


def theta(n: int, k: int) -> int:
    """Number of symmetric n x n matrices over F_2 of rank k."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if k == 0:
        return 1
    N = n_rank_k_count(n, k)
    t = _exact_div(N, orth_order(k))
    if k % 2 == 0:
        t += _exact_div(N, orth_order(k + 1))
    return t


def theta_exponent(n: int, k: int) -> int:
    """(n - (k-1)/2) k, always an integer since k(2n - k + 1) is even."""
    return k * (2 * n - k + 1) // 2


def theta_bounds(n: int, k: int):
    """(lower, upper) = (2^{e-2}, 2^{e+3}) with e = theta_exponent(n, k)."""
    e = theta_exponent(n, k)
    return Fraction(2) ** (e - 2), Fraction(2) ** (e + 3)


def product_bound_check(n: int):
    """(1/4, prod_{j=1}^{n-1} (1 - 2^-j)); asserts 1 > product > 1/4."""
    if n < 2:
        raise ValueError("n must be >= 2")
    prod = Fraction(1)
    for j in range(1, n):
        prod *= 1 - Fraction(1, 2 ** j)
    lower = Fraction(1, 4)
    assert lower < prod < 1, prod
    return lower, prod


def mr_le_k_graph_bound(n: int, k: int) -> int:
    """16 * 2^{(n - (k-1)/2) k}: upper bound on graphs with mr(F_2, G) <= k."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    return 16 * 2 ** theta_exponent(n, k)


def graph_bound_ratio(n: int, k: int) -> Fraction:
    """k * bound / 2^{C(n,2)}, which tends to 0 for k <= t n, t < 1."""
    return Fraction(k * mr_le_k_graph_bound(n, k), 2 ** num_pairs(n))


# --- brute force oracles -----------------------------------------------------

def _symmetric_f2_rows(n):
    """All symmetric n x n F_2 matrices as packed row lists."""
    pos = [(i, j) for i in range(n) for j in range(i, n)]
    for bits in range(1 << len(pos)):
        rows = [0] * n
        for t, (i, j) in enumerate(pos):
            if bits >> t & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        yield rows


def brute_symmetric_rank_census(n: int) -> list[int]:
    """counts[k] = number of symmetric n x n F_2 matrices of rank k."""
    if n > BRUTE_CENSUS_MAX_N:
        raise TooLarge(f"brute census supports n <= {BRUTE_CENSUS_MAX_N}")
    counts = [0] * (n + 1)
    for rows in _symmetric_f2_rows(n):
        counts[rank_f2_packed(rows)] += 1
    return counts


def _all_square_f2(n):
    for bits in range(1 << (n * n)):
        yield [(bits >> (i * n)) & ((1 << n) - 1) for i in range(n)]


def _mul_f2(A, B, n):
    """Packed product; rows of A and B are ints with bit j = column j."""
    out = []
    for a in A:
        r = 0
        for k in range(n):
            if a >> k & 1:
                r ^= B[k]
        out.append(r)
    return out


def _transpose_f2(A, n):
    return [sum(((A[i] >> j) & 1) << i for i in range(n)) for j in range(n)]


def brute_orth_order(n: int) -> int:
    """Count Q with Q Q^T = I over F_2 by enumeration (n <= 4)."""
    if n > 4:
        raise TooLarge("brute orthogonal count supports n <= 4")
    ident = [1 << i for i in range(n)]
    return sum(1 for Q in _all_square_f2(n) if _mul_f2(Q, _transpose_f2(Q, n), n) == ident)


def brute_symplectic_order(dim: int) -> int:
    """Count T with T^T J T = J, J a sum of H_2 blocks (dim in {2, 4})."""
    if dim % 2:
        raise OddDimension("symplectic dimension must be even")
    if dim > 4:
        raise TooLarge("brute symplectic count supports dim <= 4")
    J = [1 << (i ^ 1) for i in range(dim)]
    count = 0
    for T in _all_square_f2(dim):
        Tt = _transpose_f2(T, dim)
        if _mul_f2(_mul_f2(Tt, J, dim), T, dim) == J:
            count += 1
    return count


def brute_rank_k_count(n: int, k: int) -> int:
    """Count n x k F_2 matrices of rank k by enumeration."""
    return sum(1 for cols in product(range(1 << n), repeat=k)
               if rank_f2_packed(list(cols)) == k)


# --- reports -----------------------------------------------------------------

@dataclass
class CensusRow:
    k: int
    theta: int
    theta_brute: int | None
    lower: Fraction
    upper: Fraction

    @property
    def agrees(self):
        return self.theta_brute is None or self.theta == self.theta_brute

    @property
    def within_bounds(self):
        return self.k == 0 or self.lower < self.theta < self.upper


@dataclass
class CensusReport:
    n: int
    rows: list
    orth_order: int
    symplectic_order: int | None
    total: int

    @property
    def consistent(self):
        return self.total == 2 ** (self.n * (self.n + 1) // 2) and all(r.agrees for r in self.rows)

    def to_dict(self):
        return {
            "n": self.n,
            "rows": [{"k": r.k, "theta": r.theta, "theta_brute": r.theta_brute,
                      "lower": str(r.lower), "upper": str(r.upper),
                      "agrees": r.agrees, "within_bounds": r.within_bounds}
                     for r in self.rows],
            "orth_order": self.orth_order,
            "symplectic_order": self.symplectic_order,
            "total": self.total,
        }

    def table(self) -> str:
        lines = [f"n = {self.n}   |O(n,F2)| = {self.orth_order}"
                 + (f"   |Sp(2n,F2)| = {self.symplectic_order}" if self.symplectic_order else ""),
                 f"{'k':>3} {'theta':>22} {'brute':>12} {'lower':>24} {'upper':>24}  ok"]
        for r in self.rows:
            brute = "-" if r.theta_brute is None else str(r.theta_brute)
            ok = "yes" if r.agrees and r.within_bounds else "NO"
            lines.append(f"{r.k:>3} {r.theta:>22} {brute:>12} {str(r.lower):>24} "
                         f"{str(r.upper):>24}  {ok}")
        lines.append(f"total {self.total} (expected 2^{self.n * (self.n + 1) // 2})")
        return "\n".join(lines)


def census(n: int, brute: bool = False) -> CensusReport:
    brute_counts = brute_symmetric_rank_census(n) if brute else None
    rows = []
    for k in range(n + 1):
        lo, hi = theta_bounds(n, k) if k else (Fraction(1), Fraction(1))
        rows.append(CensusRow(k, theta(n, k), brute_counts[k] if brute_counts else None, lo, hi))
    return CensusReport(n, rows, orth_order(n), symplectic_order(2 * n),
                        sum(r.theta for r in rows))


# --- scaled average minimum rank --------------------------------------------

EXACT = "EXACT"
MONTECARLO = "MONTECARLO"


@dataclass
class AlphaReport:
    n: int
    mode: str
    alpha: Fraction | float
    samples: int
    seed: int | None = None
    stderr: float | None = None
    mr_histogram: dict = dc_field(default_factory=dict)

    def to_dict(self):
        return {"n": self.n, "mode": self.mode,
                "alpha": str(self.alpha) if isinstance(self.alpha, Fraction) else self.alpha,
                "alpha_float": float(self.alpha), "samples": self.samples, "seed": self.seed,
                "stderr": self.stderr,
                "mr_histogram": {str(k): v for k, v in sorted(self.mr_histogram.items())}}


def _mr_f2(g):
    from .minrank import f2_minrank
    return f2_minrank(g).mr


def _exact_chunk(args):
    n, start, stop = args
    hist = {}
    for g in enumerate_labeled_graphs(n, start, stop):
        m = _mr_f2(g)
        hist[m] = hist.get(m, 0) + 1
    return hist


def _mc_chunk(args):
    n, seed, start, count = args
    return [_mr_f2(g) for g in sample_graphs(n, count, seed, start)]


def _merge(hists):
    out = {}
    for h in hists:
        for k, v in h.items():
            out[k] = out.get(k, 0) + v
    return out


def _run(fn, tasks, threads):
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def mr_histogram_all(n: int, threads: int = 1) -> dict:
    """{mr: number of labeled graphs on n vertices with that mr over F_2}."""
    total = 1 << num_pairs(n)
    parts = max(1, threads * 4) if threads > 1 else 1
    step = -(-total // parts)
    tasks = [(n, s, min(total, s + step)) for s in range(0, total, step)]
    return _merge(_run(_exact_chunk, tasks, threads))


def alpha_exact(n: int, threads: int = 1) -> AlphaReport:
    """alpha_n(F_2) = sum_G mr(F_2, G) / (n 2^{C(n,2)}) as an exact Fraction."""
    if n > ALPHA_EXACT_MAX_N:
        raise TooLarge(f"exact alpha supports n <= {ALPHA_EXACT_MAX_N}")
    hist = mr_histogram_all(n, threads)
    total = sum(hist.values())
    alpha = Fraction(sum(k * v for k, v in hist.items()), n * total)
    return AlphaReport(n, EXACT, alpha, total, mr_histogram=hist)


def alpha_montecarlo(n: int, samples: int, seed: int, threads: int = 1) -> AlphaReport:
    """Mean of mr(F_2, G)/n over seeded G(n, 1/2) samples, with standard error."""
    if n > MONTECARLO_MAX_N:
        raise TooLarge(f"Monte Carlo alpha supports n <= {MONTECARLO_MAX_N}")
    parts = max(1, threads * 4) if threads > 1 else 1
    step = -(-samples // parts)
    tasks = [(n, seed, s, min(step, samples - s)) for s in range(0, samples, step)]
    mrs = [m for chunk in _run(_mc_chunk, tasks, threads) for m in chunk]
    vals = [m / n for m in mrs]
    mean = math.fsum(vals) / len(vals)
    var = math.fsum((v - mean) ** 2 for v in vals) / (len(vals) - 1) if len(vals) > 1 else 0.0
    hist = {}
    for m in mrs:
        hist[m] = hist.get(m, 0) + 1
    return AlphaReport(n, MONTECARLO, mean, samples, seed, math.sqrt(var / len(vals)), hist)


def graphs_with_mr_at_most(n: int, threads: int = 1) -> dict:
    """{k: number of graphs on n vertices with mr(F_2, G) <= k} for k = 0..n."""
    hist = mr_histogram_all(n, threads)
    out = {}
    run = 0
    for k in range(n + 1):
        run += hist.get(k, 0)
        out[k] = run
    return out


__all__ = [
    "orth_constant", "orth_order", "symplectic_order", "n_rank_k_count", "theta",
    "theta_bounds", "theta_exponent", "product_bound_check", "mr_le_k_graph_bound",
    "graph_bound_ratio", "brute_symmetric_rank_census", "brute_orth_order",
    "brute_symplectic_order", "brute_rank_k_count", "census", "CensusReport",
    "AlphaReport", "alpha_exact", "alpha_montecarlo", "graphs_with_mr_at_most",
]
