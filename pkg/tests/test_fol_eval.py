import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodef.errors import NotEnumerable, OrderUnsupported, UnboundVariable, UnknownSymbol
from geodef.field import QQ, make_gf
from geodef.fol.evaluate import Compiled, Structure, evaluate
from geodef.fol.syntax import parse, pretty

from test_fol_syntax import formulas

GF3 = make_gf(3)
GF4 = make_gf(2, 2)


def naive(phi, F, env):
    """Textbook recursive satisfaction, used as an oracle."""
    from geodef.fol import syntax as s

    def term(t):
        if isinstance(t, s.Var):
            return env[t.index]
        if isinstance(t, s.Zero):
            return 0
        if isinstance(t, s.One):
            return 1
        a, b = term(t.left), term(t.right)
        return {s.Add: F.add, s.Mul: F.mul, s.Sub: F.sub}[type(t)](a, b)

    if isinstance(phi, s.Eq):
        return term(phi.left) == term(phi.right)
    if isinstance(phi, s.Not):
        return not naive(phi.body, F, env)
    if isinstance(phi, s.And):
        return naive(phi.left, F, env) and naive(phi.right, F, env)
    if isinstance(phi, s.Or):
        return naive(phi.left, F, env) or naive(phi.right, F, env)
    if isinstance(phi, s.Implies):
        return not naive(phi.left, F, env) or naive(phi.right, F, env)
    if isinstance(phi, s.Iff):
        return naive(phi.left, F, env) == naive(phi.right, F, env)
    if isinstance(phi, (s.Exists, s.Forall)):
        vals = (naive(phi.body, F, {**env, phi.var: a}) for a in F.elements)
        return any(vals) if isinstance(phi, s.Exists) else all(vals)
    raise TypeError(phi)


def order_free(phi):
    from geodef.fol.syntax import has_order, relation_names

    return not has_order(phi) and not relation_names(phi)


@settings(max_examples=150, deadline=None)
@given(formulas.filter(order_free), st.lists(st.integers(0, 3), min_size=9, max_size=9))
def test_matches_naive_semantics(phi, values):
    env = {i + 1: v for i, v in enumerate(values)}
    assert evaluate(phi, GF4, env) == naive(phi, GF4, env)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("forall v1 exists v2 v1 + v2 = 0", True),
        ("forall v1 (!v1 = 0 -> exists v2 v1 * v2 = 1)", True),
        ("exists v1 v1 * v1 = 1 + 1", False),  # 2 is not a square mod 3
        ("forall v1 v1 * v1 * v1 = v1", True),
        ("exists v1 (!v1 = 0 & !v1 = 1 & !v1 = 1 + 1)", False),
    ],
)
def test_sentences_over_gf3(text, expected):
    assert evaluate(parse(text), GF3) is expected


def test_one_point_rule_agrees_with_enumeration():
    phi = parse("exists v3 (v3 = v1 + v2 & v3 * v3 = v1)")
    tab = Compiled(phi, GF3).table([1, 2])
    for a, b in itertools.product(range(3), repeat=2):
        s = GF3.add(a, b)
        assert tab[a + 3 * b] == (GF3.mul(s, s) == a)


def test_table_order_first_variable_least_significant():
    tab = Compiled(parse("v1 = 1 & v2 = 0"), GF3).table([1, 2])
    assert np.flatnonzero(tab).tolist() == [1]


def test_first_failure():
    c = Compiled(parse("!(v1 = 1 + 1 & v2 = 1)"), GF3)
    assert c.first_failure([1, 2]) == 2 + 3 * 1
    assert Compiled(parse("v1 = v1"), GF3).first_failure([1, 2]) is None


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        evaluate(parse("v1 = 0"), GF3)


def test_order_over_finite_field():
    with pytest.raises(OrderUnsupported):
        evaluate(parse("v1 <= 1"), GF3, {1: 0})


def test_relation_structure():
    bits = np.zeros(9, dtype=bool)
    bits[1 + 3 * 2] = True
    S = Structure(3, {"R": (2, bits)})
    assert evaluate(parse("exists v1 exists v2 R(v1, v2)"), S)
    assert evaluate(parse("R(v1, v2)"), S, {1: 1, 2: 2})
    assert not evaluate(parse("R(v2, v1)"), S, {1: 1, 2: 2})
    with pytest.raises(UnknownSymbol):
        evaluate(parse("Q(v1)"), S, {1: 0})


def test_rationals():
    assert evaluate(parse("v1 * v2 = 1"), QQ, {1: Fraction(2, 3), 2: Fraction(3, 2)})
    assert evaluate(parse("v1 <= v2"), QQ, {1: Fraction(-1), 2: Fraction(1, 7)})
    with pytest.raises(NotEnumerable):
        evaluate(parse("exists v1 v1 = 0"), QQ)
