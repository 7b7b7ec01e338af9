"""Finite fields F_q, q = p^m, with elements encoded as integers in [0, q).

An element with polynomial coefficients c_0 + c_1 x + ... + c_{m-1} x^{m-1}
is encoded as sum(c_i * p**i).  Moduli are stored highest degree first, so
``(1, 1, 1)`` is x^2 + x + 1.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .errors import NotPrime, ReducibleModulus, TooLarge, ZeroInverse, FieldError

MAX_ORDER = 1 << 16
TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# --- polynomial helpers over F_p; lists are lowest degree first --------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, b, p):
    """Remainder of a modulo monic b."""
    a = _trim(list(a))
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        c = a[-1]
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def _monic_polys(deg, p):
    """All monic polynomials of exact degree ``deg``, lowest coefficient first."""
    for low in range(p ** deg):
        coeffs = []
        for _ in range(deg):
            coeffs.append(low % p)
            low //= p
        yield coeffs + [1]


def _is_irreducible(poly, p):
    m = len(poly) - 1
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for f in _monic_polys(d, p):
            if not _polymod(poly, f, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m (highest first)."""
    if m == 1:
        return (1, 0)
    for f in _monic_polys(m, p):
        if _is_irreducible(f, p):
            return tuple(reversed(f))
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")  # unreachable


class Field:
    """The finite field F_{p^m}.

    Instances are immutable and hashable by (p, modulus).  Prefer
    :func:`make_field`, which caches instances.
    """

    def __init__(self, p: int, m: int = 1, modulus=None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be >= 1")
        if p ** m > MAX_ORDER:
            raise TooLarge(f"field order {p}^{m} exceeds {MAX_ORDER}")
        if modulus is None:
            modulus = smallest_irreducible(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[0] != 1:
            raise FieldError(f"modulus must be monic of degree {m}: {modulus}")
        low_first = list(reversed(modulus))
        if m > 1 and not _is_irreducible(low_first, p):
            raise ReducibleModulus(f"{modulus} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = modulus
        self._low_modulus = low_first
        self._tables = self.q <= TABLE_LIMIT
        if self._tables:
            q = self.q
            self.add_table = [[self._add_slow(a, b) for b in range(q)] for a in range(q)]
            self.mul_table = [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]
            self.neg_table = [self._neg_slow(a) for a in range(q)]
            self.sub_table = [[self.add_table[a][self.neg_table[b]] for b in range(q)]
                              for a in range(q)]
            self.inv_table = [0] * q
            for a in range(1, q):
                row = self.mul_table[a]
                self.inv_table[a] = row.index(1)

    # identity and representation
    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"Field({self.name})"

    def __reduce__(self):
        return (make_field, (self.p, self.m, self.modulus))

    @property
    def name(self) -> str:
        return str(self.p) if self.m == 1 else f"{self.p}^{self.m}"

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    # digit helpers
    def _digits(self, a):
        p = self.p
        out = []
        for _ in range(self.m):
            out.append(a % p)
            a //= p
        return out

    def _encode(self, digits):
        v = 0
        for c in reversed(digits):
            v = v * self.p + c
        return v

    def _add_slow(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        return self._encode([(x + y) % p for x, y in zip(self._digits(a), self._digits(b))])

    def _neg_slow(self, a):
        if self.m == 1:
            return (-a) % self.p
        p = self.p
        return self._encode([(-x) % p for x in self._digits(a)])

    def _mul_slow(self, a, b):
        if self.m == 1:
            return a * b % self.p
        p = self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        r = _polymod(prod, self._low_modulus, p)
        return self._encode(r + [0] * (self.m - len(r)))

    # arithmetic
    def add(self, a: int, b: int) -> int:
        if self._tables:
            return self.add_table[a][b]
        return self._add_slow(a, b)

    def sub(self, a: int, b: int) -> int:
        if self._tables:
            return self.sub_table[a][b]
        return self._add_slow(a, self._neg_slow(b))

    def neg(self, a: int) -> int:
        if self._tables:
            return self.neg_table[a]
        return self._neg_slow(a)

    def mul(self, a: int, b: int) -> int:
        if self._tables:
            return self.mul_table[a][b]
        return self._mul_slow(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        if self._tables:
            return self.inv_table[a]
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    def is_in_prime_subfield(self, a: int) -> bool:
        return a < self.p

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    # squares
    @property
    def squares(self) -> frozenset:
        return _squares(self)

    def is_square(self, a: int) -> bool:
        return a in self.squares

    def sqrt(self, a: int) -> int:
        """Smallest-encoded square root of a; raises ValueError for non-squares."""
        for x in range(self.q):
            if self.mul(x, x) == a:
                return x
        raise ValueError(f"{a} is not a square in F_{self.q}")

    @property
    def nonsquare(self) -> int | None:
        """Smallest non-square, or None in characteristic 2."""
        sq = self.squares
        for a in range(1, self.q):
            if a not in sq:
                return a
        return None


@lru_cache(maxsize=None)
def _squares(fs: Field) -> frozenset:
    return frozenset(fs.mul(x, x) for x in range(fs.q))


@lru_cache(maxsize=None)
def _make_field(p, m, modulus):
    return Field(p, m, modulus)


def make_field(p: int, m: int = 1, modulus=None) -> Field:
    """Build (or fetch a cached) F_{p^m}; the modulus defaults to the smallest irreducible."""
    if modulus is not None:
        modulus = tuple(modulus)
    elif is_prime(p) and m >= 1 and p ** m <= MAX_ORDER:
        modulus = smallest_irreducible(p, m)
    return _make_field(p, m, modulus)


def parse_field(text) -> Field:
    """Parse "q" or "p^m" into a field."""
    text = str(text).strip()
    m = re.fullmatch(r"(\d+)\s*\^\s*(\d+)", text)
    if m:
        return make_field(int(m.group(1)), int(m.group(2)))
    if not text.isdigit():
        raise FieldError(f"cannot parse field {text!r}")
    q = int(text)
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    if q > MAX_ORDER:
        raise TooLarge(f"field order {q} exceeds {MAX_ORDER}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NotPrime(f"{q} is not a prime power")
    return make_field(p, e)


# Module-level spellings of the arithmetic, for callers that pass the field explicitly.
def add(a, b, fs: Field):
    return fs.add(a, b)


def sub(a, b, fs: Field):
    return fs.sub(a, b)


def neg(a, fs: Field):
    return fs.neg(a)


def mul(a, b, fs: Field):
    return fs.mul(a, b)


def inv(a, fs: Field):
    return fs.inv(a)


def is_in_prime_subfield(a, fs: Field) -> bool:
    return fs.is_in_prime_subfield(a)


def enumerate_elements(fs: Field):
    return list(fs.elements())
