"""Translation of geometry-language formulas into the language of the field.

Point variable v_i becomes the block of field variables
v_{(i-1)d+1}, ..., v_{id}.  Relation symbols are replaced by their defining
field formulas, equality by coordinatewise equality, and an existential over
a point by d existentials over coordinates.  The remaining connectives are
expanded through negation, conjunction and the existential quantifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import GeodefError, NotEnumerable, UnboundSymbol
from .fol.evaluate import Compiled
from .fol.named import RelSymbol, block
from .fol.syntax import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    RelApp,
    Var,
    conj,
    free_vars,
    max_var,
    rename_bound,
    substitute,
)
from .field import FiniteField

SAMPLE_BOUND = 1 << 20


@dataclass(frozen=True)
class SymbolBinding:
    """Defining field formulas for the symbols of a geometry language."""

    symbols: Mapping[str, RelSymbol]
    d: int

    def __post_init__(self):
        for name, sym in self.symbols.items():
            if sym.d != self.d:
                raise GeodefError(f"{name} is bound in dimension {sym.d}, not {self.d}")

    @classmethod
    def of(cls, geometry) -> "SymbolBinding":
        symbols = {name: sym for name, sym, _ in geometry.relations if sym is not None}
        return cls(symbols, geometry.d)

    def __getitem__(self, name: str) -> RelSymbol:
        try:
            return self.symbols[name]
        except KeyError:
            raise UnboundSymbol(f"no defining formula for {name}") from None

    def negated(self, name: str) -> "SymbolBinding":
        """The same binding with one defining formula negated (for mutation tests)."""
        sym = self[name]
        symbols = dict(self.symbols)
        symbols[name] = RelSymbol(Not(sym.rho), sym.n, sym.d)
        return SymbolBinding(symbols, self.d)


def _point_var(t) -> int:
    if not isinstance(t, Var):
        raise GeodefError(f"geometry formulas use point variables only, got {t!r}")
    return t.index


def tr(phi: Formula, binding: SymbolBinding) -> Formula:
    d = binding.d
    # bound variables of inserted definitions live above every block in use
    top = max(max_var(phi), 1) * d

    def go(f):
        if isinstance(f, RelApp):
            sym = binding[f.name]
            if len(f.args) != sym.n:
                raise GeodefError(f"{f.name} has arity {sym.n}, applied to {len(f.args)} arguments")
            start = max(top, sym.width, max_var(sym.rho)) + 1
            rho, _ = rename_bound(sym.rho, start)
            mapping = {}
            for j, arg in enumerate(f.args, start=1):
                for src, dst in zip(block(j, d), block(_point_var(arg), d)):
                    mapping[src] = Var(dst)
            return substitute(rho, mapping)
        if isinstance(f, Eq):
            i, j = _point_var(f.left), _point_var(f.right)
            return conj(Eq(Var(a), Var(b)) for a, b in zip(block(i, d), block(j, d)))
        if isinstance(f, Not):
            return Not(go(f.body))
        if isinstance(f, And):
            return And(go(f.left), go(f.right))
        if isinstance(f, Exists):
            out = go(f.body)
            for v in reversed(block(f.var, d)):
                out = Exists(v, out)
            return out
        if isinstance(f, Or):
            return go(Not(And(Not(f.left), Not(f.right))))
        if isinstance(f, Implies):
            return go(Not(And(f.left, Not(f.right))))
        if isinstance(f, Iff):
            return go(And(Implies(f.left, f.right), Implies(f.right, f.left)))
        if isinstance(f, Forall):
            return go(Not(Exists(f.var, Not(f.body))))
        raise GeodefError(f"not a geometry-language formula: {f!r}")

    return go(phi)


def field_vars(points, d: int) -> list[int]:
    """Field variables of a list of point variables, block by block."""
    return [v for i in points for v in block(i, d)]


@dataclass
class TrCheck:
    ok: bool
    checked: int
    exhaustive: bool
    counterexample: dict | None = None  # point variable -> coordinates


def verify_tr(
    phi: Formula,
    binding: SymbolBinding,
    G,
    F=None,
    sample_bound: int = SAMPLE_BOUND,
    seed: int = 0,
) -> TrCheck:
    """Check G |= phi[p] <-> F |= tr(phi)[p-hat] over assignments of the free variables."""
    F = G.field if F is None else F
    if not isinstance(F, FiniteField):
        raise NotEnumerable(f"cannot enumerate assignments over {F!r}")
    if F != G.field or binding.d != G.d:
        raise GeodefError("binding, geometry and field disagree")
    points = sorted(free_vars(phi))
    fvars = field_vars(points, G.d)
    left = Compiled(phi, G)
    right = Compiled(tr(phi, binding), F)
    m = G.space.size
    total = m ** len(points)
    if total <= sample_bound:
        lhs = left.table(points)
        rhs = right.table(fvars)
        bad = np.flatnonzero(lhs != rhs)
        first = int(bad[0]) if len(bad) else None
        checked, exhaustive = total, True
    else:
        rng = np.random.default_rng(seed)
        picks = rng.integers(0, m, size=(sample_bound, len(points)))
        lhs = left.batch({v: picks[:, j] for j, v in enumerate(points)}, sample_bound)
        coords = G.space.coords[picks]  # (n, k, d)
        cols = {v: coords[:, j // G.d, j % G.d] for j, v in enumerate(fvars)}
        rhs = right.batch(cols, sample_bound)
        bad = np.flatnonzero(lhs != rhs)
        first = None
        if len(bad):
            row = picks[bad[0]]
            first = sum(int(x) * m**j for j, x in enumerate(row))
        checked, exhaustive = sample_bound, False
    if first is None:
        return TrCheck(True, checked, exhaustive)
    assignment = {}
    for i in points:
        assignment[i] = G.space.point(first % m)
        first //= m
    return TrCheck(False, checked, exhaustive, assignment)
