"""Classical relations over Q^d and exact tests for which affine maps respect them.

Collinearity and betweenness are preserved by every invertible affine map.
For congruence and the lightlike relation we use quadratic-form criteria on
the linear part L:

* congruence:  L^T L = c I with c > 0 (L is a similarity),
* lightlike:   L^T eta L = c eta with c != 0, eta = diag(1, -1, ..., -1),
  plus a direct check that basis null vectors stay null.

Each criterion is paired with a falsification sampler.  Samplers work on
integer difference vectors: both relations only depend on differences and are
homogeneous, so clearing denominators keeps every test exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .affine import AffineMap
from .errors import GeodefError, LengthMismatch
from .field import QQ
from .geom import semantic_bw, semantic_col

DEFAULT_BUDGET = 10**4


# -- quadratic forms ----------------------------------------------------------


@dataclass(frozen=True)
class QForm:
    matrix: tuple

    def __post_init__(self):
        M = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        d = len(M)
        if any(len(row) != d for row in M):
            raise LengthMismatch("a quadratic form needs a square matrix")
        if any(M[i][j] != M[j][i] for i in range(d) for j in range(d)):
            raise GeodefError("quadratic form matrix must be symmetric")
        object.__setattr__(self, "matrix", M)

    @property
    def d(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, d: int) -> "QForm":
        return cls(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @classmethod
    def minkowski(cls, d: int) -> "QForm":
        return cls(tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(d)) for i in range(d)))

    def value(self, x: Sequence) -> Fraction:
        x = [Fraction(a) for a in x]
        return sum((self.matrix[i][j] * x[i] * x[j] for i in range(self.d) for j in range(self.d)), Fraction(0))

    def pullback(self, L) -> "QForm":
        """The form x -> Q(L x), i.e. L^T M L."""
        d = self.d
        M = self.matrix
        ML = [[sum(M[i][k] * Fraction(L[k][j]) for k in range(d)) for j in range(d)] for i in range(d)]
        return QForm(tuple(tuple(sum(Fraction(L[k][i]) * ML[k][j] for k in range(d)) for j in range(d)) for i in range(d)))

    def ratio(self, other: "QForm") -> Fraction | None:
        """c with self = c * other, or None."""
        c = None
        for row_a, row_b in zip(self.matrix, other.matrix):
            for a, b in zip(row_a, row_b):
                if b == 0:
                    if a != 0:
                        return None
                    continue
                r = a / b
                if c is None:
                    c = r
                elif r != c:
                    return None
        return c


def _diff(p, q):
    if len(p) != len(q):
        raise LengthMismatch("points of different dimensions")
    return [Fraction(a) - Fraction(b) for a, b in zip(p, q)]


def bw(p, q, r) -> bool:
    return semantic_bw(QQ, p, q, r)


def col(p, q, r) -> bool:
    return semantic_col(QQ, p, q, r)


def col_from_bw(p, q, r) -> bool:
    """Collinearity through betweenness: one of the three points lies between the others."""
    return bw(p, q, r) or bw(q, p, r) or bw(p, r, q)


def cong(p, q, r, s) -> bool:
    I = QForm.identity(len(p))
    return I.value(_diff(p, q)) == I.value(_diff(r, s))


def lightlike(p, q) -> bool:
    return QForm.minkowski(len(p)).value(_diff(p, q)) == 0


# -- criteria ---------------------------------------------------------------


def _check_map(A: AffineMap):
    if A.field != QQ:
        raise GeodefError("expected an affine map over the rationals")


def respects_bw(A: AffineMap) -> bool:
    """Every invertible affine map preserves betweenness."""
    _check_map(A)
    return True


def cong_factor(A: AffineMap) -> Fraction | None:
    _check_map(A)
    c = QForm.identity(A.d).pullback(A.L).ratio(QForm.identity(A.d))
    return c if c is not None and c > 0 else None


def respects_cong(A: AffineMap) -> bool:
    return cong_factor(A) is not None


def null_basis(d: int) -> list[tuple]:
    """e_0 + e_i and e_0 - e_i for each spatial axis i."""
    out = []
    for i in range(1, d):
        for sign in (1, -1):
            v = [0] * d
            v[0], v[i] = 1, sign
            out.append(tuple(v))
    return out


def lightlike_factor(A: AffineMap) -> Fraction | None:
    _check_map(A)
    eta = QForm.minkowski(A.d)
    c = eta.pullback(A.L).ratio(eta)
    if c is None or c == 0:
        return None
    # the sign of c is not assumed: the cone itself has to be preserved
    Lv = (_matvec(A.L, v) for v in null_basis(A.d))
    if any(eta.value(w) != 0 for w in Lv):
        return None
    return c


def respects_lightlike(A: AffineMap) -> bool:
    return lightlike_factor(A) is not None


def _matvec(L, v):
    return [sum(Fraction(a) * b for a, b in zip(row, v)) for row in L]


# -- falsification samplers ----------------------------------------------------


def _integer_linear_part(A: AffineMap) -> np.ndarray:
    den = 1
    for row in A.L:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return np.array([[int(x * den) for x in row] for row in A.L], dtype=np.int64)


def _sq_eta(v: np.ndarray) -> np.ndarray:
    return v[..., 0] ** 2 - (v[..., 1:] ** 2).sum(axis=-1)


def _sq(v: np.ndarray) -> np.ndarray:
    return (v**2).sum(axis=-1)


def _pythagorean_rotation(rng, d: int) -> np.ndarray:
    """An integer matrix n * R with R a rational rotation in a random coordinate plane."""
    m, n = rng.integers(1, 6, size=2)
    a, b, c = m * m - n * n, 2 * m * n, m * m + n * n
    R = np.eye(d, dtype=np.int64) * c
    i, j = rng.choice(d, size=2, replace=False)
    R[i, i], R[i, j], R[j, i], R[j, j] = a, -b, b, a
    return R, c


@dataclass
class Violation:
    points: tuple  # a tuple of points, as difference representatives anchored at 0
    before: bool
    after: bool


def _cong_pairs(rng, d: int, budget: int):
    """Structured pairs of difference vectors first, then random ones."""
    eye = np.eye(d, dtype=np.int64)
    pairs = []
    for i in range(d):
        for j in range(d):
            if i < j:
                pairs.append((eye[i], eye[j]))
                pairs.append((eye[i] + eye[j], eye[i] - eye[j]))
    structured = np.array(pairs, dtype=np.int64).reshape(-1, 2, d)
    k = max(0, budget - len(structured))
    a = rng.integers(-20, 21, size=(k, d))
    b = rng.integers(-20, 21, size=(k, d))
    # a third of the random pairs are congruent by construction: half of
    # them by signed coordinate permutations, half by rational rotations
    third = k // 3
    half = third // 2
    perm = np.argsort(rng.random((half, d)), axis=1)
    b[:half] = np.take_along_axis(a[:half], perm, axis=1) * rng.choice([-1, 1], size=(half, d))
    rows = np.arange(half, third)
    idx = np.arange(len(rows))
    m, n = rng.integers(1, 6, size=(2, len(rows)))
    ra, rb, rc = m * m - n * n, 2 * m * n, m * m + n * n
    plane = np.argsort(rng.random((len(rows), d)), axis=1)
    i, j = plane[:, 0], plane[:, 1]
    a0 = a[rows]
    rot = a0 * rc[:, None]
    rot[idx, i] = ra * a0[idx, i] - rb * a0[idx, j]
    rot[idx, j] = rb * a0[idx, i] + ra * a0[idx, j]
    a[rows] = a0 * rc[:, None]
    b[rows] = rot
    return np.concatenate([structured, np.stack([a, b], axis=1)])


def _null_vectors(rng, d: int, k: int) -> np.ndarray:
    """Random integer null vectors for diag(1, -1, ..., -1)."""
    y = rng.integers(-6, 7, size=(k, max(d - 2, 0)))
    s = (y**2).sum(axis=1)
    v = np.concatenate([(s + 1)[:, None], 2 * y, (s - 1)[:, None]], axis=1)
    perm = np.argsort(rng.random((k, d - 1)), axis=1)
    v[:, 1:] = np.take_along_axis(v[:, 1:], perm, axis=1) * rng.choice([-1, 1], size=(k, d - 1))
    return v * rng.integers(1, 5, size=(k, 1))


def _lightlike_vectors(rng, A: AffineMap, d: int, budget: int) -> np.ndarray:
    structured = [np.array(v, dtype=np.int64) for v in null_basis(d)]
    # preimages of null vectors: catches maps sending non-null vectors onto the cone
    inv = A.inverse()
    for v in null_basis(d):
        w = _matvec(inv.L, v)
        den = 1
        for x in w:
            den = den * x.denominator // math.gcd(den, x.denominator)
        structured.append(np.array([int(x * den) for x in w], dtype=np.int64))
    structured = np.array(structured)
    k = max(0, budget - len(structured))
    half = k // 2
    nulls = _null_vectors(rng, d, half)
    rand = rng.integers(-20, 21, size=(k - half, d))
    return np.concatenate([structured, nulls, rand])


def find_cong_violation(A: AffineMap, budget: int = DEFAULT_BUDGET, seed: int = 0) -> Violation | None:
    """A segment pair whose congruence A changes, or None within the budget."""
    _check_map(A)
    rng = np.random.default_rng(seed)
    L = _integer_linear_part(A)
    pairs = _cong_pairs(rng, A.d, budget)
    before = _sq(pairs[:, 0]) == _sq(pairs[:, 1])
    imgs = pairs @ L.T
    after = _sq(imgs[:, 0]) == _sq(imgs[:, 1])
    bad = np.flatnonzero(before != after)
    if not len(bad):
        return None
    a, b = pairs[bad[0]]
    zero = (0,) * A.d
    pts = (zero, tuple(int(x) for x in a), zero, tuple(int(x) for x in b))
    return Violation(pts, bool(before[bad[0]]), bool(after[bad[0]]))


def find_lightlike_violation(A: AffineMap, budget: int = DEFAULT_BUDGET, seed: int = 0) -> Violation | None:
    _check_map(A)
    rng = np.random.default_rng(seed)
    L = _integer_linear_part(A)
    vecs = _lightlike_vectors(rng, A, A.d, budget)
    before = _sq_eta(vecs) == 0
    after = _sq_eta(vecs @ L.T) == 0
    bad = np.flatnonzero(before != after)
    if not len(bad):
        return None
    v = vecs[bad[0]]
    pts = ((0,) * A.d, tuple(int(x) for x in v))
    return Violation(pts, bool(before[bad[0]]), bool(after[bad[0]]))


# -- betweenness, vectorized ------------------------------------------------------


def bw_int(u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Bw(0, u, w) for integer vectors: u = t w with 0 <= t <= 1."""
    d = u.shape[-1]
    parallel = np.ones(u.shape[:-1], dtype=bool)
    for i in range(d):
        for j in range(i + 1, d):
            parallel &= u[..., i] * w[..., j] == u[..., j] * w[..., i]
    dot = (u * w).sum(axis=-1)
    ww = (w * w).sum(axis=-1)
    zero_w = ww == 0
    inside = parallel & (dot >= 0) & (dot <= ww)
    return np.where(zero_w, (u == 0).all(axis=-1), inside)


def random_triples(rng, d: int, count: int, scale: int = 12) -> np.ndarray:
    """(count, 3, d) integer points; about half satisfy Bw in the given order."""
    p = rng.integers(-5 * scale, 5 * scale + 1, size=(count, d))
    r = rng.integers(-5 * scale, 5 * scale + 1, size=(count, d))
    q = rng.integers(-5 * scale, 5 * scale + 1, size=(count, d))
    half = count // 2
    t = rng.integers(-1, scale + 2, size=(half, 1))  # a few fall just outside [0, 1]
    q[:half] = p[:half] * scale + t * (r[:half] - p[:half])
    p[:half] *= scale
    r[:half] *= scale
    return np.stack([p, q, r], axis=1)


def bw_respected_on(A: AffineMap, triples: np.ndarray) -> bool:
    """Bw(p, q, r) <-> Bw(Ap, Aq, Ar) on integer triples (translations cancel)."""
    L = _integer_linear_part(A)
    u = triples[:, 1] - triples[:, 0]
    w = triples[:, 2] - triples[:, 0]
    return bool(np.array_equal(bw_int(u, w), bw_int(u @ L.T, w @ L.T)))


# -- random rational maps -----------------------------------------------------------


def _frac(rng, lo=-6, hi=7, max_den=4) -> Fraction:
    return Fraction(int(rng.integers(lo, hi)), int(rng.integers(1, max_den + 1)))


def _invertible(L) -> bool:
    try:
        AffineMap(QQ, L, (0,) * len(L))
    except GeodefError:
        return False
    return True


def random_affine(rng, d: int, kind: str = "generic") -> AffineMap:
    """Random rational affine map of a given kind.

    kinds: generic, similarity (scaled rational rotation, maybe reflected),
    boost (Lorentz boost in the (0, 1) plane, scaled), scaling (c * I), swap.
    """
    t = tuple(_frac(rng) for _ in range(d))
    if kind == "generic":
        while True:
            L = tuple(tuple(_frac(rng) for _ in range(d)) for _ in range(d))
            if _invertible(L):
                return AffineMap(QQ, L, t)
    c = _frac(rng, 1, 6)
    if kind == "scaling":
        L = [[c if i == j else 0 for j in range(d)] for i in range(d)]
    elif kind == "similarity":
        R, n = _pythagorean_rotation(rng, d)
        if rng.integers(2):
            R[0] = -R[0]
        L = [[Fraction(int(x), int(n)) * c for x in row] for row in R]
    elif kind == "boost":
        m, n = sorted(int(x) for x in rng.choice(np.arange(1, 8), size=2, replace=False))
        a = Fraction(m * m + n * n, 2 * m * n)
        b = Fraction(n * n - m * m, 2 * m * n)
        L = [[c * int(i == j) for j in range(d)] for i in range(d)]
        L[0][0], L[0][1], L[1][0], L[1][1] = c * a, c * b, c * b, c * a
    elif kind == "swap":
        L = [[c * int(i == j) for j in range(d)] for i in range(d)]
        L[0][0], L[0][1], L[1][0], L[1][1] = 0, c, c, 0
    else:
        raise ValueError(f"unknown map kind {kind!r}")
    return AffineMap(QQ, tuple(tuple(row) for row in L), t)


MAP_KINDS = ("generic", "similarity", "boost", "scaling", "swap")


def parse_affine(text: str, d: int | None = None) -> AffineMap:
    """Rows of the linear part, one per line, then the translation vector."""
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise GeodefError("empty affine map")
    *L, t = rows
    if d is not None and len(t) != d:
        raise LengthMismatch(f"expected dimension {d}, got {len(t)}")
    return AffineMap(QQ, tuple(tuple(Fraction(x) for x in row) for row in L), tuple(Fraction(x) for x in t))
