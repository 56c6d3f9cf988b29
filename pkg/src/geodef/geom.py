"""Points of F^d, extensional relations and coordinate geometries.

Point index convention: a point (c_0, ..., c_{d-1}) has index
``sum(c_i * q**i)``.  A tuple of points (P_1, ..., P_n) has code
``sum(index(P_j) * m**(j-1))`` with ``m = q**d``; this is the base-q reading of
the flattened tuple with the least significant coordinate first.
"""

from __future__ import annotations

import struct
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapacityExceeded,
    DimensionTooSmall,
    EmptyDelta,
    GeodefError,
    LengthMismatch,
    NotEnumerable,
    OrderUnsupported,
    UniverseMismatch,
)
from .field import FiniteField, RationalField, make_gf
from .fol.evaluate import Compiled, Structure
from .fol.named import RelSymbol, col_symbol, point_formula

# materialization ceiling in bits
MAX_BITS = 1 << 30


def flatten(points: Sequence[Sequence]) -> tuple:
    return tuple(c for p in points for c in p)


def unflatten(values: Sequence, d: int) -> tuple:
    if d < 1 or len(values) % d:
        raise LengthMismatch(f"{len(values)} values do not split into points of dimension {d}")
    return tuple(tuple(values[i : i + d]) for i in range(0, len(values), d))


class PointSpace:
    """The point set F^d of a finite field, with index <-> coordinates maps."""

    def __init__(self, field: FiniteField, d: int):
        if d < 2:
            raise DimensionTooSmall(f"dimension must be at least 2, got {d}")
        if not isinstance(field, FiniteField):
            raise NotEnumerable("point spaces are only enumerated over finite fields")
        self.field = field
        self.d = d
        self.q = field.q
        self.size = field.q**d

    @cached_property
    def coords(self) -> np.ndarray:
        """(size, d) array; row i holds the coordinates of point i."""
        idx = np.arange(self.size)
        return np.stack([(idx // self.q**i) % self.q for i in range(self.d)], axis=1).astype(np.uint8)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([self.q**i for i in range(self.d)], dtype=np.int64)

    def index(self, point: Sequence[int]) -> int:
        if len(point) != self.d:
            raise LengthMismatch(f"expected {self.d} coordinates, got {len(point)}")
        return sum(int(c) * self.q**i for i, c in enumerate(point))

    def point(self, index: int) -> tuple:
        return tuple(int(c) for c in self.coords[index])

    def indices(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized index of an (..., d) coordinate array."""
        return coords.astype(np.int64) @ self.weights

    def points(self) -> list:
        return [self.point(i) for i in range(self.size)]

    def __eq__(self, other):
        return isinstance(other, PointSpace) and (self.field, self.d) == (other.field, other.d)

    def __hash__(self):
        return hash((self.field, self.d))

    def __repr__(self):
        return f"{self.field!r}^{self.d}"


class ExtRelation:
    """An n-ary relation on F^d stored as a boolean array over tuple codes."""

    def __init__(self, space: PointSpace, n: int, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (space.size**n,):
            raise LengthMismatch(f"bitset length {bits.shape} does not match {space.size}^{n}")
        bits.setflags(write=False)
        self.space = space
        self.n = n
        self.bits = bits

    # -- construction -------------------------------------------------------
    @classmethod
    def empty(cls, space: PointSpace, n: int) -> "ExtRelation":
        return cls(space, n, np.zeros(space.size**n, dtype=bool))

    @classmethod
    def from_tuples(cls, space: PointSpace, n: int, tuples: Iterable[Sequence]) -> "ExtRelation":
        """From tuples of points (each point a coordinate sequence)."""
        bits = np.zeros(space.size**n, dtype=bool)
        for t in tuples:
            bits[cls._code(space, n, t)] = True
        return cls(space, n, bits)

    @classmethod
    def from_codes(cls, space: PointSpace, n: int, codes) -> "ExtRelation":
        bits = np.zeros(space.size**n, dtype=bool)
        bits[np.asarray(codes, dtype=np.int64)] = True
        return cls(space, n, bits)

    @staticmethod
    def _code(space, n, points):
        if len(points) != n:
            raise LengthMismatch(f"expected {n} points, got {len(points)}")
        code = 0
        for j, p in enumerate(points):
            code += space.index(p) * space.size**j
        return code

    # -- queries -----------------------------------------------------------
    def code(self, points: Sequence[Sequence]) -> int:
        return self._code(self.space, self.n, points)

    def __contains__(self, points) -> bool:
        return bool(self.bits[self.code(points)])

    def codes(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def decode(self, code: int) -> tuple:
        m = self.space.size
        out = []
        for _ in range(self.n):
            code, i = divmod(int(code), m)
            out.append(self.space.point(i))
        return tuple(out)

    def tuples(self) -> list:
        return [self.decode(c) for c in self.codes()]

    def member_indices(self) -> np.ndarray:
        """(count, n) array of point indices of the members."""
        codes = self.codes()
        m = self.space.size
        return np.stack([(codes // m**j) % m for j in range(self.n)], axis=1) if self.n else codes[:, None]

    def __len__(self):
        return int(self.bits.sum())

    def __eq__(self, other):
        return (
            isinstance(other, ExtRelation)
            and self.space == other.space
            and self.n == other.n
            and np.array_equal(self.bits, other.bits)
        )

    def __hash__(self):
        return hash((self.space, self.n, self.bits.tobytes()))

    def __repr__(self):
        return f"ExtRelation({self.space!r}, n={self.n}, members={len(self)})"

    # -- images under point maps -------------------------------------------
    def image_codes(self, perm: np.ndarray) -> np.ndarray:
        """Codes of the image of the relation under a point map (array of images)."""
        perm = np.asarray(perm, dtype=np.int64)
        if perm.shape != (self.space.size,):
            raise UniverseMismatch(f"map acts on {perm.shape[0]} points, relation on {self.space.size}")
        members = self.member_indices()
        m = self.space.size
        weights = np.array([m**j for j in range(self.n)], dtype=np.int64)
        return perm[members] @ weights

    def image(self, perm) -> "ExtRelation":
        return ExtRelation.from_codes(self.space, self.n, self.image_codes(perm))

    def closed_under(self, perm) -> tuple[bool, int | None]:
        """Forward closure; returns (ok, code of the least member whose image leaves R)."""
        imgs = self.image_codes(perm)
        inside = self.bits[imgs]
        if inside.all():
            return True, None
        return False, int(self.codes()[np.argmin(inside)])

    def respected_by(self, perm) -> tuple[bool, int | None]:
        """Membership preserved both ways; returns the least violating tuple code."""
        perm = np.asarray(perm, dtype=np.int64)
        if perm.shape != (self.space.size,):
            raise UniverseMismatch(f"map acts on {perm.shape[0]} points, relation on {self.space.size}")
        m = self.space.size
        codes = np.arange(self.bits.size, dtype=np.int64)
        mapped = np.zeros_like(codes)
        rest = codes.copy()
        for j in range(self.n):
            rest, i = np.divmod(rest, m)
            mapped += perm[i] * m**j
        bad = self.bits != self.bits[mapped]
        if not bad.any():
            return True, None
        return False, int(np.argmax(bad))

    # -- serialization -------------------------------------------------------
    def to_bytes(self) -> bytes:
        F = self.space.field
        header = struct.pack("<IIII", F.q, F.k, self.space.d, self.n)
        return header + np.packbits(self.bits, bitorder="little").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes, field: FiniteField | None = None) -> "ExtRelation":
        q, k, d, n = struct.unpack("<IIII", data[:16])
        if field is None:
            field = make_gf(round(q ** (1 / k)), k)
        if (field.q, field.k) != (q, k):
            raise UniverseMismatch(f"serialized relation is over GF({q}), not {field!r}")
        space = PointSpace(field, d)
        size = space.size**n
        bits = np.unpackbits(np.frombuffer(data[16:], dtype=np.uint8), bitorder="little")[:size]
        return cls(space, n, bits.astype(bool))


# -- semantic relations ------------------------------------------------------


def _check_points(points, d=None):
    d = d if d is not None else len(points[0])
    for p in points:
        if len(p) != d:
            raise LengthMismatch("points of different dimensions")
    return d


def _diff(F, a, b):
    return [F.sub(x, y) for x, y in zip(a, b)]


def _solve_scalar(F, u, w):
    """All lambda with u = lambda * w, for vectors over a field; None if unrestricted."""
    lam = None
    zero = F.zero
    for ui, wi in zip(u, w):
        if wi == zero:
            if ui != zero:
                return []
            continue
        cand = F.div(ui, wi)
        if lam is None:
            lam = cand
        elif lam != cand:
            return []
    return None if lam is None else [lam]


def semantic_col(F, p, q, r) -> bool:
    """q = p + lambda (r - p) for some lambda, or r = p."""
    _check_points((p, q, r))
    if tuple(r) == tuple(p):
        return True
    u, w = _diff(F, q, p), _diff(F, r, p)
    if isinstance(F, FiniteField):
        return any(all(ui == F.mul(lam, wi) for ui, wi in zip(u, w)) for lam in F.elements)
    sols = _solve_scalar(F, [Fraction(x) for x in u], [Fraction(x) for x in w])
    return sols is None or bool(sols)


def semantic_bw(F, p, q, r) -> bool:
    """q = p + lambda (r - p) for some lambda in [0, 1]."""
    if not getattr(F, "ordered", False):
        raise OrderUnsupported("betweenness needs an ordered field")
    _check_points((p, q, r))
    u = [Fraction(a) - Fraction(b) for a, b in zip(q, p)]
    w = [Fraction(a) - Fraction(b) for a, b in zip(r, p)]
    sols = _solve_scalar(F, u, w)
    if sols is None:
        return all(x == 0 for x in u)  # r = p forces q = p
    return any(0 <= lam <= 1 for lam in sols)


def _sqsum(F, vec):
    total = F.zero
    for x in vec:
        total = F.add(total, F.mul(x, x))
    return total


def semantic_cong(F, p, q, r, s) -> bool:
    _check_points((p, q, r, s))
    return _sqsum(F, _diff(F, p, q)) == _sqsum(F, _diff(F, r, s))


def semantic_lambda(F, p, q) -> bool:
    _check_points((p, q))
    diff = _diff(F, p, q)
    return F.mul(diff[0], diff[0]) == _sqsum(F, diff[1:])


def col_relation(space: PointSpace) -> ExtRelation:
    """Col built directly from parametrized lines (independent of any formula)."""
    F, m = space.field, space.size
    add, mul, sub = F.add_table, F.mul_table, F.sub_table
    P = space.coords[:, None, :]
    R = space.coords[None, :, :]
    pi = np.arange(m, dtype=np.int64)[:, None]
    ri = np.arange(m, dtype=np.int64)[None, :]
    bits = np.zeros(m**3, dtype=bool)
    w = sub[R, P]
    for lam in range(F.q):
        qc = add[P, mul[lam, w]]
        qi = space.indices(qc)
        bits[pi + qi * m + ri * m * m] = True
    # r = p: every q
    diag = np.arange(m, dtype=np.int64)
    all_q = np.arange(m, dtype=np.int64)[None, :]
    bits[(diag[:, None] + all_q * m + diag[:, None] * m * m).ravel()] = True
    return ExtRelation(space, 3, bits)


# -- materialization ----------------------------------------------------------


def materialize(R: RelSymbol, F, d: int | None = None) -> ExtRelation:
    """The relation on F^d defined by the field formula R.rho."""
    d = R.d if d is None else d
    if d != R.d:
        raise GeodefError(f"relation symbol is over d={R.d}, requested d={d}")
    if isinstance(F, RationalField) or not getattr(F, "enumerable", False):
        raise NotEnumerable(f"cannot materialize relations over {F!r}")
    return _materialize(R, F)


@lru_cache(maxsize=128)
def _materialize(R: RelSymbol, F: FiniteField) -> ExtRelation:
    space = PointSpace(F, R.d)
    width = R.d * R.n
    if F.q**width > MAX_BITS:
        raise CapacityExceeded(f"{F.q}^{width} tuples exceed the materialization ceiling")
    bits = Compiled(R.rho, F).table(range(1, width + 1))
    return ExtRelation(space, R.n, bits)


class Geometry:
    """A relational structure on F^d: named relations, no functions or constants."""

    def __init__(self, field: FiniteField, d: int, relations):
        self.field = field
        self.d = d
        self.space = PointSpace(field, d)
        rels = []
        seen = set()
        for name, symbol, ext in relations:
            if name in seen:
                raise GeodefError(f"duplicate relation name {name!r}")
            seen.add(name)
            if ext.space != self.space:
                raise UniverseMismatch(f"relation {name} lives on {ext.space!r}, not {self.space!r}")
            if symbol is not None and materialize(symbol, field) != ext:
                raise GeodefError(f"relation {name} differs from the materialization of its formula")
            rels.append((name, symbol, ext))
        self.relations = rels

    @property
    def names(self) -> list[str]:
        return [name for name, _, _ in self.relations]

    def relation(self, name: str) -> ExtRelation:
        for n, _, ext in self.relations:
            if n == name:
                return ext
        raise KeyError(name)

    def symbols(self) -> dict:
        return {name: ext.n for name, _, ext in self.relations}

    @cached_property
    def has_key_relation(self) -> bool:
        """Whether one of the relations is collinearity itself."""
        col = col_relation(self.space)
        return any(ext == col for _, _, ext in self.relations)

    @property
    def field_definable(self) -> bool:
        return all(symbol is not None for _, symbol, _ in self.relations)

    def structure(self) -> Structure:
        return Structure(self.space.size, {name: (ext.n, ext.bits) for name, _, ext in self.relations})

    def __repr__(self):
        return f"Geometry({self.space!r}, {self.names})"


def build_geometry(delta, F, d: int) -> Geometry:
    """G_Delta(F): materialize each named relation symbol over F^d."""
    items = list(delta.items()) if isinstance(delta, dict) else list(delta)
    if not items:
        raise EmptyDelta("a geometry needs at least one relation")
    if not isinstance(F, FiniteField):
        raise NotEnumerable(f"cannot build an extensional geometry over {F!r}")
    return Geometry(F, d, [(name, R, materialize(R, F, d)) for name, R in items])


def affine_geometry(F: FiniteField, d: int) -> Geometry:
    return build_geometry([("Col", col_symbol(d))], F, d)


def gf2_fixture() -> Geometry:
    """{0,1}^3 with the origin and the three unit vectors as unary colors."""
    F = make_gf(2)
    colors = [("O", (0, 0, 0)), ("Ux", (1, 0, 0)), ("Uy", (0, 1, 0)), ("Uz", (0, 0, 1))]
    return build_geometry([(name, RelSymbol(point_formula(c, 3), 1, 3)) for name, c in colors], F, 3)
