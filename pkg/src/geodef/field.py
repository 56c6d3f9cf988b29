"""Exact arithmetic domains: finite fields GF(p^k) and the rationals.

Finite-field elements are integers in ``[0, p**k)``: the element with
polynomial residue ``c0 + c1*x + ... + c_{k-1}*x^(k-1)`` has index
``c0 + c1*p + ... + c_{k-1}*p^(k-1)``.  Index 0 is the additive identity and
index 1 the multiplicative identity.  All arithmetic is table driven.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .errors import CapacityExceeded, GeodefError, NotPrime, OrderUnsupported, ReducibleModulus, ZeroDenominator

# Operation tables are built eagerly; larger fields are rejected.
TABLE_BOUND = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# -- polynomials over GF(p), coefficient lists low degree first --------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    """Remainder of a modulo the monic polynomial m over GF(p)."""
    a = _trim(x % p for x in a)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        a = _trim(a)
    return a


def _monic_polys(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        # tail is (c_{deg-1}, ..., c_0), most significant first
        yield list(reversed(tail)) + [1]


def is_irreducible(modulus, p: int) -> bool:
    """Exhaustive factor check: no monic factor of degree 1..k//2 divides."""
    k = len(modulus) - 1
    if k < 1:
        return False
    for deg in range(1, k // 2 + 1):
        for f in _monic_polys(p, deg):
            if not _poly_mod(modulus, f, p):
                return False
    return True


def smallest_irreducible(p: int, k: int):
    """Lexicographically smallest monic irreducible of degree k over GF(p).

    Candidates are ordered by their non-leading coefficients read from
    x^(k-1) down to x^0, so GF(8) gets x^3 + x + 1 and GF(9) gets x^2 + 1.
    """
    for cand in _monic_polys(p, k):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("an irreducible polynomial exists for every degree")


class FiniteField:
    """GF(p^k) with precomputed operation tables."""

    ordered = False
    enumerable = True

    def __init__(self, p: int, k: int = 1, modulus=None, table_bound: int = TABLE_BOUND):
        if not is_prime(p):
            raise NotPrime(p)
        if k < 1:
            raise ValueError(f"extension degree must be >= 1, got {k}")
        if p**k > table_bound:
            raise CapacityExceeded(f"GF({p}^{k}) exceeds the table bound {table_bound}")
        if modulus is None:
            modulus = smallest_irreducible(p, k)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise ValueError(f"modulus must be monic of degree {k}: {modulus}")
            if not is_irreducible(modulus, p):
                raise ReducibleModulus(modulus)
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(modulus)
        self._build_tables()

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        coeffs = [self.coefficients(a) for a in range(q)]
        add = np.empty((q, q), dtype=np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            ca = coeffs[a]
            for b in range(q):
                cb = coeffs[b]
                add[a, b] = self.from_coefficients([(x + y) % p for x, y in zip(ca, cb)])
                prod = [0] * (2 * k - 1)
                for i, x in enumerate(ca):
                    if x:
                        for j, y in enumerate(cb):
                            prod[i + j] += x * y
                mul[a, b] = self.from_coefficients(_poly_mod(prod, self.modulus, p))
        neg = np.array([self.from_coefficients([(-x) % p for x in c]) for c in coeffs])
        sub = add[:, neg]
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            (b,) = np.nonzero(mul[a] == 1)[0]
            inv[a] = b
        dtype = np.uint8 if q <= 256 else np.uint16
        self.add_table = add.astype(dtype)
        self.mul_table = mul.astype(dtype)
        self.sub_table = sub.astype(dtype)
        self.neg_table = neg.astype(dtype)
        self.inv_table = inv.astype(dtype)
        # plain-int mirrors for scalar code paths
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._sub = sub.tolist()
        self._neg = neg.tolist()
        self._inv = inv.tolist()

    # -- encoding ----------------------------------------------------------
    def coefficients(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def from_coefficients(self, coeffs) -> int:
        idx = 0
        for c in reversed(list(coeffs)[: self.k]):
            idx = idx * self.p + c
        return idx

    @property
    def elements(self) -> range:
        return range(self.q)

    zero = 0
    one = 1

    # -- scalar arithmetic ---------------------------------------------------
    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._sub[a][b]

    def mul(self, a, b):
        return self._mul[a][b]

    def neg(self, a):
        return self._neg[a]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._inv[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        r = 1
        for _ in range(e):
            r = self._mul[r][a]
        return r

    def le(self, a, b):
        raise OrderUnsupported(f"{self} is not an ordered field")

    def element(self, value) -> int:
        """Coerce an integer (interpreted in the prime subfield) to an element."""
        return int(value) % self.p if self.k == 1 else int(value)

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def spec(self) -> str:
        return f"gf({self.p}^{self.k})" if self.k > 1 else f"gf({self.p})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))


@lru_cache(maxsize=None)
def _cached_gf(p, k, modulus):
    return FiniteField(p, k, modulus)


def make_gf(p: int, k: int = 1, modulus=None) -> FiniteField:
    """Build GF(p^k); fields with the default modulus are shared."""
    if modulus is None:
        if not is_prime(p):
            raise NotPrime(p)
        return _cached_gf(p, k, None)
    return FiniteField(p, k, modulus)


@dataclass(frozen=True)
class FieldAutomorphism:
    """The Frobenius power x -> x^(p^exponent) of a finite field."""

    domain: FiniteField
    exponent: int
    table: tuple = field(compare=False, repr=False, default=())

    def __post_init__(self):
        if not 0 <= self.exponent < self.domain.k:
            raise ValueError(f"exponent must lie in [0, {self.domain.k})")
        if not self.table:
            F = self.domain
            e = F.p**self.exponent
            object.__setattr__(self, "table", tuple(F.power(a, e) for a in F.elements))

    def __call__(self, a: int) -> int:
        return self.table[a]

    @property
    def is_identity(self) -> bool:
        return self.exponent == 0

    def compose(self, other: "FieldAutomorphism") -> "FieldAutomorphism":
        """self after other."""
        return FieldAutomorphism(self.domain, (self.exponent + other.exponent) % self.domain.k)

    def inverse(self) -> "FieldAutomorphism":
        return FieldAutomorphism(self.domain, (-self.exponent) % self.domain.k)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.table, dtype=self.domain.add_table.dtype)


def frobenius_group(F: FiniteField) -> list[FieldAutomorphism]:
    """All k automorphisms of GF(p^k); exponent 0 is the identity."""
    return [FieldAutomorphism(F, e) for e in range(F.k)]


# -- rationals ---------------------------------------------------------------

def rat(num: int, den: int = 1) -> Fraction:
    if den == 0:
        raise ZeroDenominator(f"{num}/0")
    return Fraction(num, den)


class RationalField:
    """The ordered field of rational numbers (exact, not enumerable)."""

    ordered = True
    enumerable = False
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return 1 / Fraction(a)

    @staticmethod
    def div(a, b):
        return Fraction(a) / b

    @staticmethod
    def le(a, b):
        return a <= b

    @staticmethod
    def element(value):
        return Fraction(value)

    def spec(self) -> str:
        return "Q"

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


QQ = RationalField()


_SPEC = re.compile(r"^\s*gf\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?\)\s*$", re.IGNORECASE)


def parse_field_spec(text: str):
    """Parse ``gf(p^k)``, ``gf(q)`` (q a prime power) or ``Q``."""
    if text.strip() in ("Q", "QQ", "q"):
        return QQ
    m = _SPEC.match(text)
    if not m:
        raise GeodefError(f"bad field spec {text!r}; expected gf(p^k), gf(q) or Q")
    base = int(m.group(1))
    if m.group(2) is not None:
        return make_gf(base, int(m.group(2)))
    for p in range(2, base + 1):
        if base % p == 0:
            break
    else:
        raise NotPrime(base)
    k, rest = 0, base
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise NotPrime(base)
    return make_gf(p, k)
