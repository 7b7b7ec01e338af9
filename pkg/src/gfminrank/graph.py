"""Simple undirected labeled graphs.

Vertices are 0-based internally; every text format is 1-based.  Adjacency is
stored as one int bitmask per vertex.  Edge index t enumerates vertex pairs
(i, j), i < j, in column order (0,1), (0,2), (1,2), (0,3), ... which is also
the graph6 bit order.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .errors import (
    BadGraph6,
    BadHeader,
    DimensionMismatch,
    DuplicateEdge,
    NotAClique,
    SelfLoop,
    TooLargeToEnumerate,
    VertexOutOfRange,
)

MAX_ENUM_N = 7


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple
    clique: tuple | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        adj = tuple(int(a) for a in self.adj)
        if len(adj) != self.n:
            raise DimensionMismatch("adjacency length differs from n")
        full = (1 << self.n) - 1
        for i, a in enumerate(adj):
            if a >> i & 1:
                raise SelfLoop(f"vertex {i + 1} is adjacent to itself")
            if a & ~full:
                raise VertexOutOfRange(f"vertex {i + 1} has a neighbour outside the graph")
            for j in _bits(a):
                if not adj[j] >> i & 1:
                    raise DimensionMismatch("adjacency is not symmetric")
        object.__setattr__(self, "adj", adj)
        if self.clique is not None:
            cl = tuple(sorted(self.clique))
            if not self.is_clique(cl):
                raise NotAClique(f"declared clique {[v + 1 for v in cl]} is not complete")
            object.__setattr__(self, "clique", cl)

    # construction
    @classmethod
    def from_edges(cls, n, edges, clique=None):
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise SelfLoop(f"self loop at {u + 1}")
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRange(f"edge ({u + 1}, {v + 1}) outside 1..{n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), clique)

    @classmethod
    def complete(cls, n):
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << i) for i in range(n)))

    @classmethod
    def empty(cls, n):
        return cls(n, (0,) * n)

    @classmethod
    def path(cls, n):
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    # queries
    def has_edge(self, u, v):
        return bool(self.adj[u] >> v & 1)

    def edges(self):
        """Edges (i, j), i < j, in edge-index (column) order."""
        return [(i, j) for j in range(self.n) for i in range(j) if self.adj[i] >> j & 1]

    @property
    def num_edges(self):
        return sum(bin(a).count("1") for a in self.adj) // 2

    def degree(self, v):
        return bin(self.adj[v]).count("1")

    def neighbors(self, v):
        return list(_bits(self.adj[v]))

    def is_clique(self, vertices):
        vs = list(vertices)
        return all(self.adj[u] >> v & 1 for u, v in combinations(vs, 2))

    def induced(self, vertices):
        """Induced subgraph on ``vertices``, relabelled 0..len-1 in the given order."""
        vs = list(vertices)
        pos = {v: i for i, v in enumerate(vs)}
        adj = []
        for v in vs:
            adj.append(sum(1 << pos[w] for w in _bits(self.adj[v]) if w in pos))
        return Graph(len(vs), tuple(adj))

    def permuted(self, perm):
        """Graph whose vertex i is vertex perm[i] of self."""
        return self.induced(perm)

    def with_clique(self, clique):
        return Graph(self.n, self.adj, tuple(clique))

    def edge_mask(self) -> int:
        """Bitmask over edge indices."""
        mask = 0
        t = 0
        for j in range(self.n):
            for i in range(j):
                if self.adj[i] >> j & 1:
                    mask |= 1 << t
                t += 1
        return mask

    @classmethod
    def from_edge_mask(cls, n, mask):
        adj = [0] * n
        t = 0
        for j in range(n):
            for i in range(j):
                if mask >> t & 1:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
                t += 1
        return cls(n, tuple(adj))

    def __str__(self):
        return emit_edge_list(self)


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# --- text formats ------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse "n m" followed by m lines "u v" (1-based)."""
    lines = [ln.split("#")[0].strip() for ln in text.strip().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise BadHeader("empty edge list")
    head = lines[0].split()
    if len(head) != 2 or not all(t.isdigit() for t in head):
        raise BadHeader(f"expected 'n m', got {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise BadHeader(f"header declares {m} edges, found {len(lines) - 1}")
    seen = set()
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2 or not all(t.lstrip("-").isdigit() for t in parts):
            raise BadHeader(f"bad edge line {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise SelfLoop(f"self loop at vertex {u}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise VertexOutOfRange(f"edge ({u}, {v}) outside 1..{n}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(f"edge {key} listed twice")
        seen.add(key)
        edges.append((u - 1, v - 1))
    return Graph.from_edges(n, edges)


def emit_edge_list(g: Graph) -> str:
    edges = sorted(g.edges())
    lines = [f"{g.n} {len(edges)}"] + [f"{i + 1} {j + 1}" for i, j in edges]
    return "\n".join(lines) + "\n"


def parse_graph6(s: str) -> Graph:
    s = s.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise BadGraph6("empty graph6 string")
    codes = [ord(c) - 63 for c in s]
    if any(not 0 <= c < 64 for c in codes):
        raise BadGraph6(f"invalid graph6 character in {s!r}")
    n = codes[0]
    if n == 63:
        raise BadGraph6("only the short form (n < 63) is supported")
    nbits = n * (n - 1) // 2
    body = codes[1:]
    if len(body) != (nbits + 5) // 6:
        raise BadGraph6(f"graph6 body has {len(body)} chars, expected {(nbits + 5) // 6}")
    bits = []
    for c in body:
        bits.extend((c >> (5 - k)) & 1 for k in range(6))
    if any(bits[nbits:]):
        raise BadGraph6("nonzero padding bits")
    mask = sum(1 << t for t in range(nbits) if bits[t])
    return Graph.from_edge_mask(n, mask)


def emit_graph6(g: Graph) -> str:
    if g.n >= 63:
        raise BadGraph6("only the short form (n < 63) is supported")
    nbits = g.n * (g.n - 1) // 2
    mask = g.edge_mask()
    bits = [(mask >> t) & 1 for t in range(nbits)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


# --- pattern membership ------------------------------------------------------

def pattern_matches(A, g: Graph) -> bool:
    """True iff the off-diagonal support of symmetric A is exactly the edge set."""
    if A.nrows != g.n or A.ncols != g.n:
        raise DimensionMismatch(f"matrix is {A.shape}, graph has {g.n} vertices")
    rows = A.rows
    for i in range(g.n):
        ai = g.adj[i]
        for j in range(i + 1, g.n):
            x = rows[i][j]
            if x != rows[j][i]:
                return False
            if bool(x) != bool(ai >> j & 1):
                return False
    return True


# --- cliques -----------------------------------------------------------------

def find_clique(g: Graph, k: int):
    """Lexicographically smallest k-clique as a sorted vertex list, or None."""
    if not 1 <= k <= g.n:
        return None
    adj = g.adj

    def extend(chosen, cand):
        if len(chosen) == k:
            return chosen
        need = k - len(chosen)
        while cand:
            if bin(cand).count("1") < need:
                return None
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            found = extend(chosen + [v], cand & adj[v])
            if found is not None:
                return found
        return None

    return extend([], (1 << g.n) - 1)


def relabel_clique_first(g: Graph, clique):
    """Permute so that ``clique`` occupies 0..k-1 (in the given order).

    Returns ``(graph, perm)`` where vertex i of the new graph is vertex perm[i]
    of g.  A matrix A' built for the new graph maps back via
    ``A'.permuted(inverse_permutation(perm))``.
    """
    clique = list(clique)
    if not g.is_clique(clique):
        raise NotAClique(f"{[v + 1 for v in clique]} is not a clique")
    rest = [v for v in range(g.n) if v not in set(clique)]
    perm = clique + rest
    return g.permuted(perm).with_clique(range(len(clique))), perm


def inverse_permutation(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


# --- enumeration and sampling ------------------------------------------------

def num_pairs(n):
    return n * (n - 1) // 2


def enumerate_labeled_graphs(n: int, start: int = 0, stop: int | None = None):
    """All 2^C(n,2) labeled graphs in edge-mask order (optionally a slice)."""
    if n > MAX_ENUM_N:
        raise TooLargeToEnumerate(f"refusing to enumerate graphs on {n} > {MAX_ENUM_N} vertices")
    total = 1 << num_pairs(n)
    stop = total if stop is None else min(stop, total)
    for mask in range(start, stop):
        yield Graph.from_edge_mask(n, mask)


MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood 2014): state += gamma, then mix.

    Chosen for trivially portable seeding and O(1) skip-ahead.
    """

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def skip(self, k: int):
        self.state = (self.state + k * GOLDEN_GAMMA) & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection."""
        if bound <= 1:
            return 0
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next()
            if x < limit:
                return x % bound


def words_per_graph(n):
    return max(1, (num_pairs(n) + 63) // 64)


def graph_from_words(n, words):
    nb = num_pairs(n)
    mask = 0
    for i, w in enumerate(words):
        mask |= w << (64 * i)
    return Graph.from_edge_mask(n, mask & ((1 << nb) - 1))


def sample_graphs(n: int, count: int, seed: int, start: int = 0):
    """Graphs start..start+count-1 of the seeded G(n, 1/2) stream.

    Sample i uses the 64-bit words [i*w, (i+1)*w) of SplitMix64(seed), so any
    index range can be produced independently.
    """
    w = words_per_graph(n)
    rng = SplitMix64(seed)
    rng.skip(start * w)
    for _ in range(count):
        yield graph_from_words(n, [rng.next() for _ in range(w)])


def random_graph(n: int, seed: int) -> Graph:
    """One G(n, 1/2) graph: sample 0 of the seeded stream."""
    return next(sample_graphs(n, 1, seed))
