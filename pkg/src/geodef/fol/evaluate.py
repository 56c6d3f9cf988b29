"""Tarskian satisfaction over finite structures, vectorized over assignments.

A formula is compiled once into closures.  Each closure takes an
environment list ``env`` where ``env[0]`` is the batch length and ``env[i]``
holds the value of ``v_i``: either a scalar or a numpy array with one entry
per assignment in the batch.  Quantifiers enumerate the universe.

Two exact shortcuts keep the exhaustive checks affordable:

* one-point rule: in ``exists v (v = t & ...)`` (or ``forall v (v = t & ... -> ...)``)
  the witness for ``v`` is computed from ``t`` rather than enumerated;
* rows of the batch whose truth value is already decided are dropped from
  further evaluation of conjunctions, implications and quantifier loops.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Mapping, NamedTuple

import numpy as np

from ..errors import GeodefError, NotEnumerable, OrderUnsupported, UnboundVariable, UnknownSymbol
from ..field import FiniteField, RationalField
from .syntax import (
    Add,
    And,
    Eq,
    Exists,
    Forall,
    Iff,
    Implies,
    Le,
    Mul,
    Not,
    One,
    Or,
    RelApp,
    Sub,
    Var,
    Zero,
    conj,
    flatten_and,
    free_vars,
    max_var,
    term_vars,
)

# compress the batch once at most this fraction of rows stays undecided
_COMPRESS_AT = 0.75
TABLE_CHUNK = 1 << 18


class Structure:
    """A finite universe ``range(size)`` with optional field operations and relations.

    ``relations`` maps a name to ``(arity, bits)`` where ``bits`` is a boolean
    array of length ``size**arity`` indexed by ``sum(a_j * size**j)``.
    """

    ordered = False
    enumerable = True

    def __init__(self, size: int, relations=None, field: FiniteField | None = None):
        self.size = size
        self.relations = dict(relations or {})
        self.field = field

    @classmethod
    def of(cls, interp) -> "Structure":
        if isinstance(interp, Structure):
            return interp
        if isinstance(interp, FiniteField):
            return cls(interp.q, field=interp)
        if isinstance(interp, RationalField):
            raise NotEnumerable("the rationals cannot be enumerated")
        to_structure = getattr(interp, "structure", None)
        if to_structure is not None:
            return to_structure()
        raise TypeError(f"cannot evaluate over {interp!r}")


def _full(r, n):
    if np.ndim(r) == 0:
        return np.full(n, bool(r))
    return r


def _restrict(env, mask, live):
    out = [int(np.count_nonzero(mask))] + [None] * (len(env) - 1)
    for i in live:
        x = env[i]
        out[i] = x[mask] if isinstance(x, np.ndarray) else x
    return out


class _Node(NamedTuple):
    fn: Callable
    reads: frozenset  # env slots the closure looks at
    cost: float  # rough per-row work estimate, used only for ordering


class _Scope:
    def __init__(self, bound):
        self.bound = frozenset(bound)
        self.hoisted = []  # (slot, fn, reads) computed on entry to the block
        self.slots = {}  # term -> slot


class _Compiler:
    def __init__(self, structure: Structure, first_slot: int):
        self.s = structure
        self.f = structure.field
        self.next_slot = first_slot
        self.scopes: list[_Scope] = []
        if self.f is not None:
            q = self.f.q
            if q <= 16:
                # flat 256-entry tables indexed by (a << 4) | b keep uint8 arithmetic
                self._shift = True
                self._flat = {}
                for kind, tab in ((Add, self.f.add_table), (Mul, self.f.mul_table), (Sub, self.f.sub_table)):
                    flat = np.zeros(256, dtype=np.uint8)
                    for a in range(q):
                        flat[a * 16 : a * 16 + q] = tab[a]
                    self._flat[kind] = flat
            else:
                self._shift = False

    # -- terms -------------------------------------------------------------
    def term(self, t) -> _Node:
        if isinstance(t, Var):
            i = t.index
            return _Node(lambda env: env[i], frozenset((i,)), 0)
        if self.f is None:
            raise GeodefError(f"structure has no operations or constants; cannot evaluate {t!r}")
        if isinstance(t, Zero):
            return _Node(lambda env: 0, frozenset(), 0)
        if isinstance(t, One):
            return _Node(lambda env: 1, frozenset(), 0)
        target = self._hoist_target(t)
        if target is not None and t in target.slots:
            slot = target.slots[t]
            return _Node(lambda env: env[slot], frozenset((slot,)), 0)
        left, right = self.term(t.left), self.term(t.right)
        lf, rf = left.fn, right.fn
        if self._shift:
            flat = self._flat[type(t)]

            def fn(env):
                return flat[(lf(env) << 4) | rf(env)]

        else:
            table = {Add: self.f.add_table, Mul: self.f.mul_table, Sub: self.f.sub_table}[type(t)]

            def fn(env):
                return table[lf(env), rf(env)]

        node = _Node(fn, left.reads | right.reads, left.cost + right.cost + 1)
        if target is None:
            return node
        slot = self.next_slot
        self.next_slot += 1
        target.slots[t] = slot
        target.hoisted.append((slot, fn, node.reads))
        return _Node(lambda env: env[slot], frozenset((slot,)), 0)

    def _hoist_target(self, t):
        """Outermost enclosing block in whose loop t is invariant, if any."""
        tv = term_vars(t)
        target = None
        for scope in reversed(self.scopes):
            if tv & scope.bound:
                break
            target = scope
        return target

    # -- formulas ------------------------------------------------------------
    def formula(self, phi) -> _Node:
        return getattr(self, "_" + type(phi).__name__.lower())(phi)

    def _eq(self, phi):
        left, right = self.term(phi.left), self.term(phi.right)
        lf, rf = left.fn, right.fn
        return _Node(lambda env: lf(env) == rf(env), left.reads | right.reads, left.cost + right.cost + 1)

    def _le(self, phi):
        raise OrderUnsupported("'<=' needs an ordered interpretation; finite fields have none")

    def _relapp(self, phi):
        try:
            arity, bits = self.s.relations[phi.name]
        except KeyError:
            raise UnknownSymbol(f"relation symbol {phi.name!r} is not interpreted") from None
        if arity != len(phi.args):
            raise GeodefError(f"{phi.name} has arity {arity}, applied to {len(phi.args)} arguments")
        args = [self.term(a) for a in phi.args]
        fns = [a.fn for a in args]
        weights = [self.s.size**j for j in range(arity)]

        def fn(env):
            code = 0
            for a, w in zip(fns, weights):
                v = a(env)
                code = code + (v.astype(np.int64) if isinstance(v, np.ndarray) else int(v)) * w
            return bits[code]

        reads = frozenset().union(*(a.reads for a in args))
        return _Node(fn, reads, sum(a.cost for a in args) + arity)

    def _not(self, phi):
        body = self.formula(phi.body)
        bf = body.fn
        return _Node(lambda env: ~_full(bf(env), env[0]), body.reads, body.cost)

    def _and(self, phi):
        parts = sorted((self.formula(p) for p in flatten_and(phi)), key=lambda node: node.cost)
        fns = [p.fn for p in parts]
        # slots still needed after part i
        later = [frozenset().union(*(p.reads for p in parts[i + 1 :])) for i in range(len(parts))]

        def fn(env):
            acc = np.ones(env[0], bool)
            idx = None
            cur = env
            for part, live in zip(fns, later):
                r = _full(part(cur), cur[0])
                if r.all():
                    continue
                if idx is None:
                    acc &= r
                    idx = np.arange(env[0])
                else:
                    acc[idx[~r]] = False
                m = int(r.sum())
                if m == 0:
                    break
                if m <= _COMPRESS_AT * cur[0]:
                    idx = idx[r]
                    cur = _restrict(cur, r, live)
            return acc

        reads = frozenset().union(*(p.reads for p in parts))
        return _Node(fn, reads, sum(p.cost for p in parts))

    def _either(self, first, second, negate_first):
        """first' | second, evaluating second only where first' is false."""
        ff, sf, live = first.fn, second.fn, second.reads

        def fn(env):
            n = env[0]
            a = _full(ff(env), n)
            if negate_first:
                a = ~a
            miss = ~a
            m = int(miss.sum())
            if m == 0:
                return a
            if m <= _COMPRESS_AT * n:
                out = a.copy()
                out[miss] = _full(sf(_restrict(env, miss, live)), m)
                return out
            return a | _full(sf(env), n)

        return _Node(fn, first.reads | second.reads, first.cost + second.cost)

    def _or(self, phi):
        a, b = self.formula(phi.left), self.formula(phi.right)
        if b.cost < a.cost:
            a, b = b, a
        return self._either(a, b, False)

    def _implies(self, phi):
        a, b = self.formula(phi.left), self.formula(phi.right)
        if b.cost < a.cost:
            # b | !a
            neg = _Node(lambda env, f=a.fn: ~_full(f(env), env[0]), a.reads, a.cost)
            return self._either(b, neg, False)
        return self._either(a, b, True)

    def _iff(self, phi):
        a, b = self.formula(phi.left), self.formula(phi.right)
        af, bf = a.fn, b.fn
        return _Node(
            lambda env: _full(af(env), env[0]) == _full(bf(env), env[0]),
            a.reads | b.reads,
            a.cost + b.cost,
        )

    def _exists(self, phi):
        return self._quantifier(phi)

    def _forall(self, phi):
        return self._quantifier(phi)

    def _quantifier(self, phi):
        kind = type(phi)
        order = []
        body = phi
        while isinstance(body, kind):
            order.append(body.var)
            body = body.body
        block = []
        for v in reversed(order):
            if v not in block:
                block.append(v)
        block.reverse()
        bset = set(block)

        tail = None
        if kind is Exists:
            conjuncts = flatten_and(body)
        elif isinstance(body, Implies):
            conjuncts = flatten_and(body.left)
            tail = body.right
        else:
            conjuncts = []

        defs = {}
        for i, c in enumerate(conjuncts):
            if not isinstance(c, Eq):
                continue
            for lhs, rhs in ((c.left, c.right), (c.right, c.left)):
                if (
                    isinstance(lhs, Var)
                    and lhs.index in bset
                    and lhs.index not in defs
                    and lhs.index not in term_vars(rhs)
                ):
                    defs[lhs.index] = (i, rhs)
                    break

        enumerated = [v for v in block if v not in defs]
        solved = []
        pending = [v for v in block if v in defs]
        while pending:
            known = set(enumerated) | set(solved)
            ready = [v for v in pending if (term_vars(defs[v][1]) & bset) <= known]
            if ready:
                solved.extend(ready)
                pending = [v for v in pending if v not in ready]
            else:
                v = pending.pop(0)
                del defs[v]
                enumerated.append(v)
        enumerated = [v for v in block if v in enumerated]

        used = {defs[v][0] for v in solved}
        rest = [c for i, c in enumerate(conjuncts) if i not in used]
        if not solved:
            matrix_phi = body
        elif kind is Exists:
            matrix_phi = conj(rest) if rest else None
        else:
            matrix_phi = Implies(conj(rest), tail) if rest else tail

        scope = _Scope(block)
        self.scopes.append(scope)
        try:
            setters = [(v, self.term(defs[v][1])) for v in solved]
            matrix = self.formula(matrix_phi) if matrix_phi is not None else _Node(lambda env: True, frozenset(), 0)
        finally:
            self.scopes.pop()

        hoisted = scope.hoisted
        setter_fns = [(v, node.fn) for v, node in setters]
        mfn = matrix.fn
        reads = matrix.reads.union(*(node.reads for _, node in setters))
        live = sorted(r for r in reads if r not in bset)
        size = self.s.size
        universal = kind is Forall
        # block variables are bound here and hoisted slots are filled here
        own = bset | {slot for slot, _, _ in hoisted}
        outer_reads = frozenset(r for r in reads if r not in own).union(
            *(frozenset(r for r in hr if r not in own) for _, _, hr in hoisted)
        )
        cost = size ** len(enumerated) * (matrix.cost + sum(n.cost for _, n in setters) + 1)

        def fn(env):
            n = env[0]
            cur = list(env)
            for slot, hfn, _ in hoisted:
                cur[slot] = hfn(cur)
            acc = np.full(n, universal)
            idx = None
            for vals in itertools.product(range(size), repeat=len(enumerated)):
                for v, x in zip(enumerated, vals):
                    cur[v] = x
                for v, t in setter_fns:
                    cur[v] = t(cur)
                r = _full(mfn(cur), cur[0])
                decided = ~r if universal else r
                if not decided.any():
                    continue
                if idx is None:
                    acc[decided] = not universal
                    idx = np.arange(n)
                else:
                    acc[idx[decided]] = not universal
                keep = ~decided
                m = int(keep.sum())
                if m == 0:
                    break
                if m <= _COMPRESS_AT * cur[0]:
                    idx = idx[keep]
                    cur = _restrict(cur, keep, live)
            return acc

        return _Node(fn, outer_reads, cost)


class Compiled:
    """A formula compiled against a finite structure."""

    def __init__(self, phi, interp):
        self.phi = phi
        self.structure = Structure.of(interp)
        self.free = free_vars(phi)
        first_slot = max_var(phi) + 1
        compiler = _Compiler(self.structure, first_slot)
        self._fn = compiler.formula(phi).fn
        self.width = compiler.next_slot

    def _env(self, values: Mapping[int, object], n: int):
        missing = self.free - set(values)
        if missing:
            raise UnboundVariable(f"no value for v{min(missing)}")
        env = [n] + [None] * (self.width - 1)
        for i, x in values.items():
            if 0 < i < self.width and i in self.free:
                env[i] = x
        return env

    def __call__(self, env: Mapping[int, object]) -> bool:
        out = self._fn(self._env({i: int(x) for i, x in env.items()}, 1))
        return bool(np.all(out))

    def batch(self, columns: Mapping[int, object], n: int | None = None) -> np.ndarray:
        """Evaluate across aligned value columns (scalars broadcast)."""
        if n is None:
            n = max((len(c) for c in columns.values() if isinstance(c, np.ndarray)), default=1)
        return _full(self._fn(self._env(columns, n)), n)

    def _columns(self, variables, start, stop, fixed):
        size = self.structure.size
        dtype = np.uint8 if size <= 256 else np.int64
        idx = np.arange(start, stop, dtype=np.int64)
        cols = dict(fixed or {})
        w = 1
        for v in variables:
            cols[v] = ((idx // w) % size).astype(dtype)
            w *= size
        return cols

    def table(self, variables, fixed: Mapping[int, object] | None = None, chunk: int = TABLE_CHUNK) -> np.ndarray:
        """Truth values for every assignment of ``variables`` (first variable least significant)."""
        variables = list(variables)
        total = self.structure.size ** len(variables)
        out = np.empty(total, dtype=bool)
        for start in range(0, total, chunk):
            stop = min(total, start + chunk)
            out[start:stop] = self.batch(self._columns(variables, start, stop, fixed), stop - start)
        return out

    def first_failure(self, variables, fixed: Mapping[int, object] | None = None) -> int | None:
        """Index of the least assignment of ``variables`` falsifying the formula, or None.

        Chunks grow geometrically so that an early counterexample is found cheaply.
        """
        variables = list(variables)
        total = self.structure.size ** len(variables)
        start, chunk = 0, 64
        while start < total:
            stop = min(total, start + chunk)
            r = self.batch(self._columns(variables, start, stop, fixed), stop - start)
            if not r.all():
                return start + int(np.argmin(r))
            start = stop
            chunk = min(chunk * 4, TABLE_CHUNK)
        return None


def compile_formula(phi, interp) -> Compiled:
    return Compiled(phi, interp)


def evaluate(phi, interp, env: Mapping[int, object] | None = None) -> bool:
    """Decide ``interp |= phi[env]``; env maps variable indices to elements."""
    env = dict(env or {})
    if isinstance(interp, RationalField):
        missing = free_vars(phi) - set(env)
        if missing:
            raise UnboundVariable(f"no value for v{min(missing)}")
        return _eval_exact(phi, {i: Fraction(x) for i, x in env.items()})
    return Compiled(phi, interp)(env)


def _term_exact(t, env):
    if isinstance(t, Var):
        return env[t.index]
    if isinstance(t, Zero):
        return Fraction(0)
    if isinstance(t, One):
        return Fraction(1)
    a, b = _term_exact(t.left, env), _term_exact(t.right, env)
    if isinstance(t, Add):
        return a + b
    if isinstance(t, Mul):
        return a * b
    return a - b


def _eval_exact(phi, env):
    if isinstance(phi, Eq):
        return _term_exact(phi.left, env) == _term_exact(phi.right, env)
    if isinstance(phi, Le):
        return _term_exact(phi.left, env) <= _term_exact(phi.right, env)
    if isinstance(phi, Not):
        return not _eval_exact(phi.body, env)
    if isinstance(phi, And):
        return _eval_exact(phi.left, env) and _eval_exact(phi.right, env)
    if isinstance(phi, Or):
        return _eval_exact(phi.left, env) or _eval_exact(phi.right, env)
    if isinstance(phi, Implies):
        return (not _eval_exact(phi.left, env)) or _eval_exact(phi.right, env)
    if isinstance(phi, Iff):
        return _eval_exact(phi.left, env) == _eval_exact(phi.right, env)
    if isinstance(phi, (Exists, Forall)):
        raise NotEnumerable("quantifiers cannot be evaluated over the rationals")
    if isinstance(phi, RelApp):
        raise GeodefError("relation symbols are not interpreted over the rationals")
    raise TypeError(f"not a formula: {phi!r}")
