import pytest

from geodef.errors import FormulaSyntaxError
from geodef.field import make_gf
from geodef.fol.named import col_symbol, lightlike_symbol
from geodef.io import SpecError, data_path, load_geo, parse_geo, parse_named_fol, relation_symbol


def test_macros():
    assert relation_symbol("@gamma", 2) == col_symbol(2)
    assert relation_symbol("@lambda : 2", 3) == lightlike_symbol(3)
    with pytest.raises(SpecError):
        relation_symbol("@gamma : 2", 2)


def test_formula_stanza():
    R = relation_symbol("v1 = 0 & v2 = 0 : 1", 2)
    assert R.n == 1 and R.d == 2
    with pytest.raises(SpecError):
        relation_symbol("v1 = 0", 2)


def test_parse_geo():
    spec = parse_geo("field gf(3)\ndim 2\n# comment\nCol := @gamma : 3\nO := v1 = 0 & v2 = 0 : 1\n")
    G = spec.build()
    assert G.field == make_gf(3) and G.names == ["Col", "O"]
    assert len(G.relation("O")) == 1


def test_flags_and_conflicts():
    spec = parse_geo("Col := @gamma : 3")
    assert spec.build("gf(5)", 2).space.size == 25
    with pytest.raises(SpecError):
        spec.build(None, 2)
    fixed = parse_geo("field gf(3)\nCol := @gamma")
    with pytest.raises(SpecError):
        fixed.build("gf(5)", 2)


def test_bad_files():
    with pytest.raises(SpecError):
        parse_geo("")
    with pytest.raises(SpecError):
        parse_geo("Col = @gamma")
    with pytest.raises(SpecError):
        parse_geo("dim two\nCol := @gamma")
    with pytest.raises(FormulaSyntaxError):
        parse_geo("R := v1 == 0 : 1").build("gf(3)", 2)


@pytest.mark.parametrize("name", ["affine.geo", "lightlike.geo", "origin.geo", "gf2fixture.geo"])
def test_shipped_geometries(name):
    spec = load_geo(data_path("geometries") / name)
    G = spec.build(spec.field or "gf(3)", spec.dim or 2)
    assert G.names


def test_named_fol():
    named = parse_named_fol("a := v1 = 0\nv2 = 1  # trailing\n\n")
    assert [n for n, _ in named] == ["a", "f2"]
