import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodef.errors import FormulaSyntaxError, UnknownSymbol
from geodef.fol.syntax import (
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
    free_vars,
    max_var,
    parse,
    parse_term,
    pretty,
    quantifier_depth,
    rename_bound,
    substitute,
)
from geodef.io import data_path, parse_named_fol

V = Var

terms = st.recursive(
    st.one_of(st.builds(Var, st.integers(1, 9)), st.just(Zero()), st.just(One())),
    lambda sub: st.one_of(st.builds(Add, sub, sub), st.builds(Mul, sub, sub), st.builds(Sub, sub, sub)),
    max_leaves=6,
)
atoms = st.one_of(
    st.builds(Eq, terms, terms),
    st.builds(Le, terms, terms),
    st.builds(lambda a, b: RelApp("R", (a, b)), terms, terms),
)
formulas = st.recursive(
    atoms,
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Implies, sub, sub),
        st.builds(Iff, sub, sub),
        st.builds(Exists, st.integers(1, 9), sub),
        st.builds(Forall, st.integers(1, 9), sub),
    ),
    max_leaves=8,
)


@settings(max_examples=300)
@given(formulas)
def test_pretty_parse_roundtrip(phi):
    assert parse(pretty(phi)) == phi


def test_roundtrip_corpus():
    named = parse_named_fol(data_path("roundtrip.fol").read_text())
    assert len(named) == 20
    for _, phi in named:
        assert parse(pretty(phi)) == phi


def test_precedence():
    assert parse("v1 = 0 & v2 = 0 | v3 = 0") == Or(And(Eq(V(1), Zero()), Eq(V(2), Zero())), Eq(V(3), Zero()))
    assert parse("v1 = 0 -> v2 = 0 -> v3 = 0") == Implies(
        Eq(V(1), Zero()), Implies(Eq(V(2), Zero()), Eq(V(3), Zero()))
    )
    # quantifiers bind tighter than connectives
    assert parse("exists v1 v1 = 0 & v2 = 1") == And(Exists(1, Eq(V(1), Zero())), Eq(V(2), One()))
    assert parse_term("v1 + v2 * v3") == Add(V(1), Mul(V(2), V(3)))
    assert parse_term("v1 - v2 - v3") == Sub(Sub(V(1), V(2)), V(3))


def test_syntax_errors():
    for bad in ["v0 = 1", "v1 = ", "(v1 = 0", "v1 = 2", "exists x v1 = 0", "v1 = 0 v2 = 0"]:
        with pytest.raises((FormulaSyntaxError, ValueError)):
            parse(bad)


def test_symbol_table():
    phi = parse("Col(v1, v2, v3)", {"Col": 3})
    assert phi == RelApp("Col", (V(1), V(2), V(3)))
    with pytest.raises(UnknownSymbol):
        parse("Bw(v1, v2, v3)", {"Col": 3})


def test_free_vars_and_depth():
    phi = parse("exists v4 (v1 = v4 & forall v2 v2 = v3)")
    assert free_vars(phi) == {1, 3}
    assert max_var(phi) == 4
    assert quantifier_depth(phi) == 2


def test_substitute_avoids_capture():
    phi = parse("exists v2 v1 = v2")
    out = substitute(phi, {1: V(2)})
    assert free_vars(out) == {2}
    assert isinstance(out, Exists) and out.var != 2


def test_rename_bound():
    phi = parse("exists v1 (v1 = v2 & forall v1 v1 = 0)")
    out, nxt = rename_bound(phi, 10)
    assert free_vars(out) == {2}
    assert out == parse("exists v10 (v10 = v2 & forall v11 v11 = 0)")
    assert nxt == 12
