"""First-order terms and formulas over a fixed variable enumeration v1, v2, ...

Concrete syntax (ASCII)::

    formula := iff
    iff     := imp ("<->" imp)*
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary | ("exists" | "forall") VAR unary | atom
    atom    := "(" formula ")" | NAME "(" [term ("," term)*] ")"
             | term ("=" | "<=") term
    term    := prod (("+" | "-") prod)*
    prod    := factor ("*" factor)*
    factor  := VAR | "0" | "1" | "(" term ")"
    VAR     := "v" digits        (positive index)

Quantifiers and negation bind tighter than every binary connective, so the
scope of ``exists v7 (...)`` is exactly its parenthesized body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from ..errors import FormulaSyntaxError, UnknownSymbol

# -- terms --------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"variable indices are positive, got {self.index}")


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sub:
    left: "Term"
    right: "Term"


Term = Union[Var, Zero, One, Add, Mul, Sub]

# -- formulas -----------------------------------------------------------------


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Le:
    left: Term
    right: Term


@dataclass(frozen=True)
class RelApp:
    name: str
    args: tuple


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: int
    body: "Formula"


Formula = Union[Eq, Le, RelApp, Not, And, Or, Implies, Iff, Exists, Forall]

_BINARY_TERMS = (Add, Mul, Sub)
_BINARY_FORMULAS = (And, Or, Implies, Iff)
_QUANTIFIERS = (Exists, Forall)


def V(i: int) -> Var:
    return Var(i)


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction of a nonempty sequence."""
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty disjunction")
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def tsum(parts: Iterable[Term]) -> Term:
    parts = list(parts)
    if not parts:
        return Zero()
    out = parts[0]
    for p in parts[1:]:
        out = Add(out, p)
    return out


def flatten_and(phi: Formula) -> list:
    if isinstance(phi, And):
        return flatten_and(phi.left) + flatten_and(phi.right)
    return [phi]


def exists_block(variables: Iterable[int], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Exists(v, body)
    return body


def forall_block(variables: Iterable[int], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Forall(v, body)
    return body


# -- variables ----------------------------------------------------------------


def term_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.index,))
    if isinstance(t, _BINARY_TERMS):
        return term_vars(t.left) | term_vars(t.right)
    return frozenset()


def free_vars(phi) -> frozenset:
    """Free variable indices of a formula (or a term)."""
    if isinstance(phi, (Eq, Le)):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, RelApp):
        out = frozenset()
        for a in phi.args:
            out |= term_vars(a)
        return out
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, _BINARY_FORMULAS):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, _QUANTIFIERS):
        return free_vars(phi.body) - {phi.var}
    return term_vars(phi)


def all_vars(phi) -> frozenset:
    """Every variable index occurring in phi, bound or free."""
    if isinstance(phi, _QUANTIFIERS):
        return all_vars(phi.body) | {phi.var}
    if isinstance(phi, Not):
        return all_vars(phi.body)
    if isinstance(phi, _BINARY_FORMULAS):
        return all_vars(phi.left) | all_vars(phi.right)
    return free_vars(phi)


def max_var(phi) -> int:
    vs = all_vars(phi)
    return max(vs) if vs else 0


def quantifier_depth(phi) -> int:
    if isinstance(phi, _QUANTIFIERS):
        return 1 + quantifier_depth(phi.body)
    if isinstance(phi, Not):
        return quantifier_depth(phi.body)
    if isinstance(phi, _BINARY_FORMULAS):
        return max(quantifier_depth(phi.left), quantifier_depth(phi.right))
    return 0


def has_order(phi) -> bool:
    if isinstance(phi, Le):
        return True
    if isinstance(phi, (Not,) + _QUANTIFIERS):
        return has_order(phi.body)
    if isinstance(phi, _BINARY_FORMULAS):
        return has_order(phi.left) or has_order(phi.right)
    return False


def relation_names(phi) -> frozenset:
    if isinstance(phi, RelApp):
        return frozenset((phi.name,))
    if isinstance(phi, (Not,) + _QUANTIFIERS):
        return relation_names(phi.body)
    if isinstance(phi, _BINARY_FORMULAS):
        return relation_names(phi.left) | relation_names(phi.right)
    return frozenset()


# -- substitution -------------------------------------------------------------


def substitute_term(t: Term, mapping: Mapping[int, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.index, t)
    if isinstance(t, _BINARY_TERMS):
        return type(t)(substitute_term(t.left, mapping), substitute_term(t.right, mapping))
    return t


def substitute(phi: Formula, mapping: Mapping[int, Term], fresh_from: int | None = None) -> Formula:
    """Capture-avoiding simultaneous substitution of terms for free variables.

    Bound variables that would capture a variable of an inserted term are
    renamed to indices at or above ``fresh_from`` (default: above every
    index in sight).
    """
    if fresh_from is None:
        top = max_var(phi)
        for t in mapping.values():
            tv = term_vars(t)
            if tv:
                top = max(top, max(tv))
        top = max([top] + list(mapping))
        fresh_from = top + 1
    counter = [fresh_from]
    return _subst(phi, dict(mapping), counter)


def _subst(phi, mapping, counter):
    if isinstance(phi, (Eq, Le)):
        return type(phi)(substitute_term(phi.left, mapping), substitute_term(phi.right, mapping))
    if isinstance(phi, RelApp):
        return RelApp(phi.name, tuple(substitute_term(a, mapping) for a in phi.args))
    if isinstance(phi, Not):
        return Not(_subst(phi.body, mapping, counter))
    if isinstance(phi, _BINARY_FORMULAS):
        return type(phi)(_subst(phi.left, mapping, counter), _subst(phi.right, mapping, counter))
    if isinstance(phi, _QUANTIFIERS):
        v = phi.var
        inner = {k: t for k, t in mapping.items() if k != v}
        live = free_vars(phi.body)
        inner = {k: t for k, t in inner.items() if k in live}
        if not inner:
            return phi
        captured = any(v in term_vars(t) for t in inner.values())
        if captured:
            nv = counter[0]
            counter[0] += 1
            inner[v] = Var(nv)
            return type(phi)(nv, _subst(phi.body, inner, counter))
        return type(phi)(v, _subst(phi.body, inner, counter))
    raise TypeError(f"not a formula: {phi!r}")


def rename_bound(phi: Formula, start: int) -> tuple[Formula, int]:
    """Rename every bound variable to fresh indices start, start+1, ...

    Returns the renamed formula and the next unused index.
    """
    counter = [start]

    def go(f, env):
        if isinstance(f, (Eq, Le, RelApp)):
            return _subst(f, env, counter) if env else f
        if isinstance(f, Not):
            return Not(go(f.body, env))
        if isinstance(f, _BINARY_FORMULAS):
            return type(f)(go(f.left, env), go(f.right, env))
        if isinstance(f, _QUANTIFIERS):
            nv = counter[0]
            counter[0] += 1
            return type(f)(nv, go(f.body, {**env, f.var: Var(nv)}))
        raise TypeError(f"not a formula: {f!r}")

    out = go(phi, {})
    return out, counter[0]


def shift_vars(phi: Formula, mapping: Mapping[int, int]) -> Formula:
    """Rename free variables by an index map (capture-avoiding)."""
    return substitute(phi, {k: Var(v) for k, v in mapping.items()})


# -- pretty printing ----------------------------------------------------------

_FORMULA_LEVEL = {Iff: 1, Implies: 2, Or: 3, And: 4}
_FORMULA_OP = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
# (left child minimum level, right child minimum level)
_FORMULA_SIDES = {Iff: (1, 2), Implies: (3, 2), Or: (3, 4), And: (4, 5)}


def term_str(t: Term, level: int = 0) -> str:
    if isinstance(t, Var):
        return f"v{t.index}"
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, (Add, Sub)):
        op = "+" if isinstance(t, Add) else "-"
        s = f"{term_str(t.left, 1)} {op} {term_str(t.right, 2)}"
        return f"({s})" if level > 1 else s
    if isinstance(t, Mul):
        s = f"{term_str(t.left, 2)}*{term_str(t.right, 3)}"
        return f"({s})" if level > 2 else s
    raise TypeError(f"not a term: {t!r}")


def pretty(phi: Formula, level: int = 0) -> str:
    """Render a formula in the concrete syntax; ``parse(pretty(f)) == f``."""
    if isinstance(phi, Eq):
        return f"{term_str(phi.left)} = {term_str(phi.right)}"
    if isinstance(phi, Le):
        return f"{term_str(phi.left)} <= {term_str(phi.right)}"
    if isinstance(phi, RelApp):
        return f"{phi.name}({', '.join(term_str(a) for a in phi.args)})"
    if isinstance(phi, Not):
        return "!" + _scoped(phi.body)
    if isinstance(phi, _QUANTIFIERS):
        kw = "exists" if isinstance(phi, Exists) else "forall"
        return f"{kw} v{phi.var} {_scoped(phi.body)}"
    if isinstance(phi, _BINARY_FORMULAS):
        kind = type(phi)
        lmin, rmin = _FORMULA_SIDES[kind]
        s = f"{_at(phi.left, lmin)} {_FORMULA_OP[kind]} {_at(phi.right, rmin)}"
        return f"({s})" if level > _FORMULA_LEVEL[kind] else s
    raise TypeError(f"not a formula: {phi!r}")


def _at(phi, minlevel):
    if isinstance(phi, _BINARY_FORMULAS):
        return pretty(phi, minlevel)
    return pretty(phi, minlevel)


def _scoped(body):
    if isinstance(body, (Not, RelApp) + _QUANTIFIERS):
        return pretty(body, 5)
    return f"({pretty(body)})"


pretty_print = pretty


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|<=|:=|[()!&|=+*,\-])|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>\d+))"
)
_VAR = re.compile(r"^v([0-9]+)$")


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.toks = []  # (kind, value, pos)
        pos = 0
        n = len(text)
        while True:
            while pos < n and text[pos].isspace():
                pos += 1
            if pos >= n:
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
            start = m.start(m.lastgroup)
            self.toks.append((m.lastgroup, m.group(m.lastgroup), start))
            pos = m.end()
        self.toks.append(("eof", "", n))
        self.i = 0

    def peek(self, ahead=0):
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.i]
        if tok[0] != "eof":
            self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        what = "end of input" if tok[0] == "eof" else repr(tok[1])
        return FormulaSyntaxError(f"{msg}, found {what}", self.text, tok[2])

    def accept(self, value):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            raise self.error(f"expected {value!r}")


class _Parser:
    def __init__(self, text, symbols):
        self.t = _Tokens(text)
        self.symbols = symbols

    def formula(self):
        left = self.imp()
        while self.t.accept("<->"):
            left = Iff(left, self.imp())
        return left

    def imp(self):
        left = self.disj()
        if self.t.accept("->"):
            return Implies(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.t.accept("|"):
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.t.accept("&"):
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.t.peek()
        if tok[0] == "op" and tok[1] == "!":
            self.t.next()
            return Not(self.unary())
        if tok[0] == "name" and tok[1] in ("exists", "forall"):
            self.t.next()
            vtok = self.t.next()
            m = _VAR.match(vtok[1]) if vtok[0] == "name" else None
            if not m or int(m.group(1)) < 1:
                raise self.t.error("expected a variable after quantifier", vtok)
            body = self.unary()
            cls = Exists if tok[1] == "exists" else Forall
            return cls(int(m.group(1)), body)
        return self.atom()

    def atom(self):
        tok = self.t.peek()
        if tok[0] == "name" and not _VAR.match(tok[1]) and tok[1] not in ("exists", "forall"):
            nxt = self.t.peek(1)
            if nxt[0] == "op" and nxt[1] == "(":
                return self.relapp()
            raise self.t.error("expected '(' after relation symbol", nxt)
        if tok[0] == "op" and tok[1] == "(":
            start = self.t.i
            try:
                return self.comparison()
            except FormulaSyntaxError as term_err:
                self.t.i = start
                try:
                    self.t.expect("(")
                    inner = self.formula()
                    self.t.expect(")")
                    return inner
                except FormulaSyntaxError as formula_err:
                    raise max(term_err, formula_err, key=lambda e: e.pos)
        return self.comparison()

    def relapp(self):
        name_tok = self.t.next()
        name = name_tok[1]
        self.t.expect("(")
        args = []
        if not self.t.accept(")"):
            args.append(self.term())
            while self.t.accept(","):
                args.append(self.term())
            self.t.expect(")")
        if self.symbols is not None:
            if name not in self.symbols:
                raise UnknownSymbol(f"unknown relation symbol {name!r} at position {name_tok[2]}")
            arity = self.symbols[name]
            if arity is not None and arity != len(args):
                raise FormulaSyntaxError(
                    f"{name} expects {arity} arguments, got {len(args)}", self.t.text, name_tok[2]
                )
        return RelApp(name, tuple(args))

    def comparison(self):
        left = self.term()
        if self.t.accept("="):
            return Eq(left, self.term())
        if self.t.accept("<="):
            return Le(left, self.term())
        raise self.t.error("expected '=' or '<='")

    def term(self):
        left = self.prod()
        while True:
            if self.t.accept("+"):
                left = Add(left, self.prod())
            elif self.t.accept("-"):
                left = Sub(left, self.prod())
            else:
                return left

    def prod(self):
        left = self.factor()
        while self.t.accept("*"):
            left = Mul(left, self.factor())
        return left

    def factor(self):
        tok = self.t.next()
        kind, val, pos = tok
        if kind == "name":
            m = _VAR.match(val)
            if m and int(m.group(1)) >= 1:
                return Var(int(m.group(1)))
            raise self.t.error("expected a term", tok)
        if kind == "num":
            if val == "0":
                return Zero()
            if val == "1":
                return One()
            raise self.t.error("only the constants 0 and 1 are terms", tok)
        if kind == "op" and val == "(":
            inner = self.term()
            self.t.expect(")")
            return inner
        raise self.t.error("expected a term", tok)


def parse(text: str, symbols: Mapping[str, int | None] | None = None) -> Formula:
    """Parse a formula.

    ``symbols`` maps admissible relation names to their arities; when given,
    any other name raises UnknownSymbol.
    """
    p = _Parser(text, symbols)
    phi = p.formula()
    if p.t.peek()[0] != "eof":
        raise p.t.error("unexpected trailing input")
    return phi


def parse_term(text: str) -> Term:
    p = _Parser(text, None)
    t = p.term()
    if p.t.peek()[0] != "eof":
        raise p.t.error("unexpected trailing input")
    return t
