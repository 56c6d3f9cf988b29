"""Builders for the field-language formulas used throughout the package.

Point variable i of an n-ary relation occupies the field variables
``v_{1+(i-1)d} .. v_{id}``; :func:`block` returns those indices.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DimensionTooSmall, EmptyDelta, GeodefError
from .syntax import (
    Add,
    And,
    Eq,
    Exists,
    Formula,
    Iff,
    Implies,
    Le,
    Mul,
    One,
    Or,
    Sub,
    Term,
    Var,
    Zero,
    conj,
    forall_block,
    free_vars,
    max_var,
    substitute,
    tsum,
)


def _check_dim(d: int):
    if d < 2:
        raise DimensionTooSmall(f"dimension must be at least 2, got {d}")


def block(i: int, d: int) -> list[int]:
    """Field variable indices of point variable i (1-based)."""
    return list(range(1 + (i - 1) * d, i * d + 1))


@dataclass(frozen=True)
class RelSymbol:
    """A field formula ``rho`` read as an n-ary relation on d-tuples."""

    rho: Formula
    n: int
    d: int

    def __post_init__(self):
        _check_dim(self.d)
        if self.n < 1:
            raise GeodefError(f"arity must be positive, got {self.n}")
        extra = sorted(v for v in free_vars(self.rho) if v > self.d * self.n)
        if extra:
            raise GeodefError(
                f"free variable v{extra[0]} lies outside v1..v{self.d * self.n}"
            )

    @property
    def width(self) -> int:
        return self.d * self.n


def numeral(c: int) -> Term:
    """The term 1 + 1 + ... + 1 (c times); 0 for c = 0."""
    if c == 0:
        return Zero()
    out = One()
    for _ in range(c - 1):
        out = Add(out, One())
    return out


# -- collinearity and betweenness --------------------------------------------


def _gamma_core(d: int):
    x, y, z = block(1, d), block(2, d), block(3, d)
    v = 3 * d + 1
    line = conj(
        Eq(Add(Var(y[i]), Mul(Var(v), Var(x[i]))), Add(Var(x[i]), Mul(Var(v), Var(z[i]))))
        for i in range(d)
    )
    same = conj(Eq(Var(z[i]), Var(x[i])) for i in range(d))
    return v, line, same


def gamma(d: int) -> Formula:
    """Collinearity of the points x, y, z (free variables v1..v_{3d})."""
    _check_dim(d)
    v, line, same = _gamma_core(d)
    return Exists(v, Or(line, same))


def beta(d: int) -> Formula:
    """Betweenness: y lies on the segment from x to z (ordered fields only)."""
    _check_dim(d)
    v, line, _ = _gamma_core(d)
    return Exists(v, And(line, And(Le(Zero(), Var(v)), Le(Var(v), One()))))


def _square(t):
    return Mul(t, t)


def lightlike(d: int) -> Formula:
    """(p1 - q1)^2 = (p2 - q2)^2 + ... + (pd - qd)^2 on points p, q."""
    _check_dim(d)
    p, q = block(1, d), block(2, d)
    diffs = [Sub(Var(p[i]), Var(q[i])) for i in range(d)]
    return Eq(_square(diffs[0]), tsum(_square(t) for t in diffs[1:]))


def congruence(d: int) -> Formula:
    """Squared distance of (p, q) equals that of (r, s); every summand squared."""
    _check_dim(d)
    p, q, r, s = (block(i, d) for i in (1, 2, 3, 4))
    left = tsum(_square(Sub(Var(p[i]), Var(q[i]))) for i in range(d))
    right = tsum(_square(Sub(Var(r[i]), Var(s[i]))) for i in range(d))
    return Eq(left, right)


def diagonal(d: int) -> Formula:
    _check_dim(d)
    p, q = block(1, d), block(2, d)
    return conj(Eq(Var(p[i]), Var(q[i])) for i in range(d))


def point_formula(coords, d: int) -> Formula:
    """Unary color {c} for a point whose coordinates lie in the prime subfield."""
    _check_dim(d)
    if len(coords) != d:
        raise GeodefError(f"expected {d} coordinates, got {len(coords)}")
    return conj(Eq(Var(i + 1), numeral(c)) for i, c in enumerate(coords))


def col_symbol(d: int) -> RelSymbol:
    return RelSymbol(gamma(d), 3, d)


def lightlike_symbol(d: int) -> RelSymbol:
    return RelSymbol(lightlike(d), 2, d)


def congruence_symbol(d: int) -> RelSymbol:
    return RelSymbol(congruence(d), 4, d)


def diagonal_symbol(d: int) -> RelSymbol:
    return RelSymbol(diagonal(d), 2, d)


# -- frames and frame maps --------------------------------------------------


def _frame_blocks(d: int) -> list[list[int]]:
    return [block(i + 1, d) for i in range(d + 1)]


def iota_instance(frame: list[list[int]], lam: list[int]) -> Formula:
    """The vectors frame[i] - frame[0] (i = 1..d) are linearly independent."""
    d = len(frame) - 1
    e0 = frame[0]
    combos = [
        Eq(
            tsum(Mul(Var(lam[i]), Sub(Var(frame[i + 1][j]), Var(e0[j]))) for i in range(d)),
            Zero(),
        )
        for j in range(d)
    ]
    trivial = conj(Eq(Var(lam[i]), Zero()) for i in range(d))
    return forall_block(lam, Implies(conj(combos), trivial))


def iota(d: int) -> Formula:
    """Frame independence; free variables v1..v_{d^2+d} hold e0, e1, ..., ed."""
    _check_dim(d)
    top = d * d + d
    return iota_instance(_frame_blocks(d), list(range(top + 1, top + d + 1)))


def theta_instance(frame: list[list[int]], x: list[int], y: list[int]) -> Formula:
    """y = e0 + sum_i x_i * (e_i - e0), coordinate by coordinate."""
    d = len(frame) - 1
    e0 = frame[0]
    eqs = []
    for j in range(d):
        image = Var(e0[j])
        for i in range(d):
            image = Add(image, Mul(Var(x[i]), Sub(Var(frame[i + 1][j]), Var(e0[j]))))
        eqs.append(Eq(Var(y[j]), image))
    return conj(eqs)


def theta(d: int) -> Formula:
    """The frame map sends x to y; free variables v1..v_{d^2+3d}."""
    _check_dim(d)
    top = d * d + d
    x = list(range(top + 1, top + d + 1))
    y = list(range(top + d + 1, top + 2 * d + 1))
    return theta_instance(_frame_blocks(d), x, y)


def tarski_instance(rho: Formula, targets: list[int]) -> Formula:
    """rho(x1..xm) as exists v1 (v1 = x1 & exists v2 (v2 = x2 & ... rho))."""
    body = rho
    for j in reversed(range(len(targets))):
        body = Exists(j + 1, And(Eq(Var(j + 1), Var(targets[j])), body))
    return body


def direct_instance(rho: Formula, targets: list[int]) -> Formula:
    """rho with v_j replaced by its target variable (capture-avoiding)."""
    return substitute(rho, {j + 1: Var(t) for j, t in enumerate(targets)})


def theta_R(R: RelSymbol, d: int | None = None, tarskian: bool = True) -> Formula:
    """The frame map exists and respects R; free variables v1..v_{d^2+d}."""
    d = R.d if d is None else d
    _check_dim(d)
    if d != R.d:
        raise GeodefError(f"relation symbol is over d={R.d}, requested d={d}")
    n = R.n
    frame = _frame_blocks(d)
    base = max(d * d + d, d * n, max_var(R.rho))
    xs = [list(range(base + 1 + i * d, base + 1 + (i + 1) * d)) for i in range(n)]
    yoff = base + n * d
    ys = [list(range(yoff + 1 + i * d, yoff + 1 + (i + 1) * d)) for i in range(n)]
    lam = list(range(d * d + d + 1, d * d + 2 * d + 1))
    instance = tarski_instance if tarskian else direct_instance
    flat_x = [v for b in xs for v in b]
    flat_y = [v for b in ys for v in b]
    maps = conj(theta_instance(frame, xs[i], ys[i]) for i in range(n))
    respect = Implies(maps, Iff(instance(R.rho, flat_x), instance(R.rho, flat_y)))
    return And(iota_instance(frame, lam), forall_block(flat_x + flat_y, respect))


def theta_Delta(delta, d: int, tarskian: bool = True) -> Formula:
    """Conjunction of theta_R over a finite nonempty set of relation symbols."""
    _check_dim(d)
    delta = list(delta)
    if not delta:
        raise EmptyDelta("theta_Delta needs at least one relation symbol")
    return conj(theta_R(R, d, tarskian) for R in delta)
