import numpy as np
import pytest

from geodef.checks import standard_geometry
from geodef.errors import CapacityExceeded, DimensionTooSmall, LengthMismatch, NotEnumerable, UniverseMismatch
from geodef.field import QQ, make_gf, rat
from geodef.fol.named import col_symbol, lightlike_symbol
from geodef.geom import (
    ExtRelation,
    PointSpace,
    col_relation,
    flatten,
    gf2_fixture,
    materialize,
    semantic_bw,
    semantic_col,
    semantic_lambda,
    unflatten,
)

GF3 = make_gf(3)


def test_flatten():
    assert flatten(((1, 2), (3, 4))) == (1, 2, 3, 4)
    assert unflatten((1, 2, 3, 4), 2) == ((1, 2), (3, 4))
    with pytest.raises(LengthMismatch):
        unflatten((1, 2, 3), 2)


def test_point_space_indexing():
    S = PointSpace(GF3, 2)
    assert S.size == 9
    assert S.index((1, 2)) == 1 + 2 * 3
    assert S.point(7) == (1, 2)
    assert all(S.index(S.point(i)) == i for i in range(9))
    with pytest.raises(DimensionTooSmall):
        PointSpace(GF3, 1)
    with pytest.raises(NotEnumerable):
        PointSpace(QQ, 2)


def test_relation_codes():
    S = PointSpace(GF3, 2)
    R = ExtRelation.from_tuples(S, 2, [((1, 0), (0, 1))])
    assert R.codes().tolist() == [1 + 3 * 9]
    assert ((1, 0), (0, 1)) in R and ((0, 1), (1, 0)) not in R
    assert R.tuples() == [((1, 0), (0, 1))]
    assert ExtRelation.from_bytes(R.to_bytes(), GF3) == R


@pytest.mark.parametrize("spec", ["gf(2)", "gf(3)", "gf(4)", "gf(5)"])
def test_col_materialization_matches_semantics(spec):
    G = standard_geometry(spec, 2)
    col = G.relation("Col")
    assert col == col_relation(G.space)
    F = G.field
    pts = G.space.points()
    rng = np.random.default_rng(1)
    for _ in range(300):
        p, q, r = (pts[i] for i in rng.integers(0, len(pts), 3))
        assert ((p, q, r) in col) == semantic_col(F, p, q, r)


def test_col_counts_gf3():
    # every triple with a repeated point, plus 12 lines * 3! orderings of distinct points
    col = standard_geometry("gf(3)", 2).relation("Col")
    repeated = 9 * 9 * 3 - 2 * 9
    assert len(col) == repeated + 12 * 6


def test_lambda_semantics():
    G = standard_geometry("gf(5)", 2, ("lambda",))
    lam = G.relation("lambda")
    for p in G.space.points()[:5]:
        for q in G.space.points():
            assert ((p, q) in lam) == semantic_lambda(G.field, p, q)


def test_semantics_over_rationals():
    a, b, c = (rat(0), rat(0)), (rat(1, 2), rat(1, 2)), (rat(1), rat(1))
    assert semantic_col(QQ, a, b, c) and semantic_bw(QQ, a, b, c)
    assert not semantic_bw(QQ, b, a, c)


def test_materialize_over_rationals():
    with pytest.raises(NotEnumerable):
        materialize(col_symbol(2), QQ)


def test_capacity():
    with pytest.raises(CapacityExceeded):
        materialize(col_symbol(4), make_gf(7))


def test_closed_under_and_respect():
    G = gf2_fixture()
    O = G.relation("O")
    swap = np.arange(8)
    swap[[0, 7]] = [7, 0]
    ok, code = O.closed_under(swap)
    assert not ok and O.decode(code) == ((0, 0, 0),)
    with pytest.raises(UniverseMismatch):
        O.closed_under(np.arange(9))


def test_geometry_metadata():
    G = standard_geometry("gf(3)", 2, ("lambda",))
    assert G.names == ["Col", "lambda"]
    assert G.symbols() == {"Col": 3, "lambda": 2}
    assert G.has_key_relation and G.field_definable
    assert not gf2_fixture().has_key_relation
