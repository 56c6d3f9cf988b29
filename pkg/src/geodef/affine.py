"""Affine transformations p -> L p + t over a field, and affine groups of geometries."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapacityExceeded, DependentFrame, GeodefError, SingularLinearPart, UniverseMismatch
from .field import FiniteField, RationalField
from .geom import ExtRelation, Geometry, PointSpace
from .groups import PointGroup, perm_dtype

MAX_AFFINE = 10**7


# -- exact linear algebra ------------------------------------------------------


def _coerce(F, x):
    return Fraction(x) if isinstance(F, RationalField) else int(x)


def row_reduce(F, rows):
    """Reduced row echelon form by Gauss-Jordan; returns (matrix, pivot columns)."""
    M = [[_coerce(F, x) for x in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != F.zero), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, x) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != F.zero:
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(F, rows) -> int:
    return len(row_reduce(F, rows)[1])


def determinant(F, rows):
    """Determinant by elimination (tracks row swaps and pivot scalings)."""
    M = [[_coerce(F, x) for x in row] for row in rows]
    n = len(M)
    det = F.one
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != F.zero), None)
        if piv is None:
            return F.zero
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = F.neg(det)
        det = F.mul(det, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            f = F.mul(M[i][c], inv)
            if f != F.zero:
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[c])]
    return det


def mat_inverse(F, rows):
    n = len(rows)
    aug = [list(row) + [F.one if i == j else F.zero for j in range(n)] for i, row in enumerate(rows)]
    M, pivots = row_reduce(F, aug)
    if pivots[:n] != list(range(n)):
        raise SingularLinearPart("matrix is singular")
    return tuple(tuple(row[n:]) for row in M)


def _matvec(F, L, x):
    out = []
    for row in L:
        acc = F.zero
        for a, b in zip(row, x):
            acc = F.add(acc, F.mul(a, b))
        out.append(acc)
    return tuple(out)


def _matmul(F, A, B):
    cols = list(zip(*B))
    return tuple(tuple(_matvec(F, [row], col)[0] for col in cols) for row in A)


# -- affine maps ----------------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """x -> L x + t with L invertible."""

    field: object
    L: tuple
    t: tuple

    def __post_init__(self):
        F = self.field
        L = tuple(tuple(_coerce(F, x) for x in row) for row in self.L)
        t = tuple(_coerce(F, x) for x in self.t)
        d = len(t)
        if len(L) != d or any(len(row) != d for row in L):
            raise GeodefError(f"linear part must be {d}x{d}")
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "t", t)
        if determinant(F, L) == F.zero:
            raise SingularLinearPart(f"singular linear part {L}")

    @property
    def d(self) -> int:
        return len(self.t)

    @classmethod
    def identity(cls, F, d: int) -> "AffineMap":
        return cls(F, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)), (0,) * d)

    @classmethod
    def translation(cls, F, t: Sequence) -> "AffineMap":
        d = len(t)
        return cls(F, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)), tuple(t))

    def apply(self, p: Sequence) -> tuple:
        F = self.field
        Lp = _matvec(F, self.L, [_coerce(F, x) for x in p])
        return tuple(F.add(a, b) for a, b in zip(Lp, self.t))

    __call__ = apply

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        if self.field != other.field or self.d != other.d:
            raise GeodefError("affine maps over different fields or dimensions")
        F = self.field
        L = _matmul(F, self.L, other.L)
        t = tuple(F.add(a, b) for a, b in zip(_matvec(F, self.L, other.t), self.t))
        return AffineMap(F, L, t)

    def inverse(self) -> "AffineMap":
        F = self.field
        Linv = mat_inverse(F, self.L)
        t = tuple(F.neg(x) for x in _matvec(F, Linv, self.t))
        return AffineMap(F, Linv, t)

    def is_identity(self) -> bool:
        return self == AffineMap.identity(self.field, self.d)

    def perm(self, space: PointSpace) -> np.ndarray:
        """The map as a permutation of point indices."""
        if space.field != self.field or space.d != self.d:
            raise UniverseMismatch("affine map and point space disagree")
        F = space.field
        coords = space.coords
        img = np.empty_like(coords)
        for i in range(self.d):
            acc = np.full(space.size, self.t[i], dtype=coords.dtype)
            for j in range(self.d):
                acc = F.add_table[acc, F.mul_table[self.L[i][j], coords[:, j]]]
            img[:, i] = acc
        return space.indices(img).astype(perm_dtype(space.size))

    def encode(self) -> str:
        """'L;t' with row-major entries of L and then t as element indices."""
        return " ".join(str(x) for row in self.L for x in row) + ";" + " ".join(str(x) for x in self.t)


def frame_map(F, e0: Sequence, es: Sequence[Sequence]) -> AffineMap:
    """The affine map taking the origin to e0 and each unit vector E_j to e_j."""
    d = len(e0)
    if len(es) != d:
        raise GeodefError(f"a frame in dimension {d} needs {d} further points")
    cols = [[F.sub(_coerce(F, a), _coerce(F, b)) for a, b in zip(e, e0)] for e in es]
    L = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
    if determinant(F, L) == F.zero:
        raise DependentFrame("the frame vectors e_i - e_0 are linearly dependent")
    return AffineMap(F, L, tuple(e0))


def gl_order(q: int, d: int) -> int:
    out = 1
    for i in range(d):
        out *= q**d - q**i
    return out


def affine_group_order(q: int, d: int) -> int:
    return gl_order(q, d) * q**d


def _check_capacity(F: FiniteField, d: int, capacity: int):
    if not isinstance(F, FiniteField):
        raise GeodefError("affine groups are enumerated over finite fields only")
    n = affine_group_order(F.q, d)
    if n > capacity:
        raise CapacityExceeded(f"|AffineTrf| = {n} over GF({F.q})^{d} exceeds {capacity}")
    return n


def general_linear(F: FiniteField, d: int) -> list[tuple]:
    """Invertible d x d matrices in lexicographic row-major order."""
    out = []
    for entries in itertools.product(range(F.q), repeat=d * d):
        L = tuple(tuple(entries[i * d : (i + 1) * d]) for i in range(d))
        if rank(F, L) == d:
            out.append(L)
    return out


def _translations(F: FiniteField, d: int):
    return list(itertools.product(range(F.q), repeat=d))


def enumerate_affine_group(F: FiniteField, d: int, capacity: int = MAX_AFFINE) -> list[AffineMap]:
    """All affine maps, ordered lexicographically on (L row-major, t)."""
    _check_capacity(F, d, capacity)
    out = []
    for L in general_linear(F, d):
        for t in _translations(F, d):
            m = object.__new__(AffineMap)
            object.__setattr__(m, "field", F)
            object.__setattr__(m, "L", L)
            object.__setattr__(m, "t", t)
            out.append(m)
    return out


def affine_perms(space: PointSpace, capacity: int = MAX_AFFINE) -> np.ndarray:
    """All affine maps as an (N, m) permutation array, in enumeration order."""
    F, d, m = space.field, space.d, space.size
    _check_capacity(F, d, capacity)
    gl = np.array(general_linear(F, d), dtype=np.uint8)  # (g, d, d)
    coords = space.coords  # (m, d)
    lin = np.zeros((len(gl), m, d), dtype=np.uint8)
    for i in range(d):
        acc = np.zeros((len(gl), m), dtype=np.uint8)
        for j in range(d):
            acc = F.add_table[acc, F.mul_table[gl[:, i, j][:, None], coords[None, :, j]]]
        lin[:, :, i] = acc
    trans = np.array(_translations(F, d), dtype=np.uint8)  # (q^d, d)
    img = F.add_table[lin[:, None, :, :], trans[None, :, None, :]]  # (g, q^d, m, d)
    return space.indices(img).reshape(-1, m).astype(perm_dtype(m))


def affine_group(space: PointSpace, capacity: int = MAX_AFFINE) -> PointGroup:
    return PointGroup(affine_perms(space, capacity), space.size)


def affine_from_perm(space: PointSpace, perm) -> AffineMap | None:
    """The affine map realizing a point permutation, or None if there is none."""
    F, d = space.field, space.d
    perm = np.asarray(perm)
    t = space.point(int(perm[0]))
    cols = []
    for j in range(d):
        unit = [0] * d
        unit[j] = 1
        img = space.point(int(perm[space.index(unit)]))
        cols.append([F.sub(a, b) for a, b in zip(img, t)])
    L = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
    try:
        A = AffineMap(F, L, t)
    except SingularLinearPart:
        return None
    return A if np.array_equal(A.perm(space), perm) else None


# -- respect ------------------------------------------------------------------


def _as_perm(A, space: PointSpace) -> np.ndarray:
    if isinstance(A, AffineMap):
        return A.perm(space)
    return np.asarray(A)


def respects(A, R: ExtRelation):
    """(True, None) or (False, least violating tuple in flattened lexicographic order)."""
    perm = _as_perm(A, R.space).astype(np.int64)
    m, n = R.space.size, R.n
    codes = np.arange(R.bits.size, dtype=np.int64)
    mapped = np.zeros_like(codes)
    rest = codes
    for j in range(n):
        rest, i = np.divmod(rest, m)
        mapped += perm[i] * m**j
    bad = np.flatnonzero(R.bits != R.bits[mapped])
    if not len(bad):
        return True, None
    witness = min((R.decode(c) for c in bad), key=lambda t: tuple(x for p in t for x in p))
    return False, witness


def filter_respecting(perms: np.ndarray, relations, chunk_elems: int = 1 << 22) -> np.ndarray:
    """Rows of ``perms`` that map every relation into itself (bijections: respect)."""
    keep = np.ones(len(perms), dtype=bool)
    for R in relations:
        members = R.member_indices()
        if not len(members):
            continue
        m = R.space.size
        weights = np.array([m**j for j in range(R.n)], dtype=np.int64)
        step = max(1, chunk_elems // (len(members) * R.n))
        for start in range(0, len(perms), step):
            sel = np.flatnonzero(keep[start : start + step]) + start
            if not len(sel):
                continue
            imgs = perms[sel][:, members].astype(np.int64) @ weights  # (k, count)
            keep[sel] = R.bits[imgs].all(axis=1)
    return perms[keep]


def affaut(G: Geometry, capacity: int = MAX_AFFINE) -> PointGroup:
    """AffAut(G): the affine maps respecting every relation of G."""
    perms = affine_perms(G.space, capacity)
    rels = sorted((ext for _, _, ext in G.relations), key=len)
    return PointGroup(filter_respecting(perms, rels), G.space.size)
