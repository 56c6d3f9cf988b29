import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodef.affine import (
    AffineMap,
    affaut,
    affine_from_perm,
    affine_group,
    affine_group_order,
    determinant,
    enumerate_affine_group,
    frame_map,
    gl_order,
    mat_inverse,
    rank,
    respects,
)
from geodef.checks import standard_geometry
from geodef.errors import CapacityExceeded, DependentFrame, SingularLinearPart
from geodef.field import make_gf
from geodef.geom import PointSpace, gf2_fixture

GF3 = make_gf(3)
GF4 = make_gf(2, 2)


def test_orders():
    assert gl_order(3, 2) == 48
    assert affine_group_order(3, 2) == 432
    assert affine_group_order(4, 2) == 2880
    assert affine_group_order(2, 3) == 1344


@pytest.mark.parametrize("F,d", [(GF3, 2), (GF4, 2), (make_gf(2), 3)])
def test_affine_group_size(F, d):
    group = affine_group(PointSpace(F, d))
    assert len(group) == affine_group_order(F.q, d)
    assert group.is_group()


def test_capacity():
    with pytest.raises(CapacityExceeded):
        enumerate_affine_group(GF3, 2, capacity=100)


def test_singular():
    with pytest.raises(SingularLinearPart):
        AffineMap(GF3, ((1, 2), (2, 1)), (0, 0))  # det = 1 - 4 = 0 mod 3
    assert determinant(GF3, ((1, 2), (2, 1))) == 0
    assert rank(GF3, ((1, 2), (2, 1))) == 1


def test_gf2_translation_violates_origin():
    G = gf2_fixture()
    A = AffineMap.translation(G.field, (1, 0, 0))
    ok, witness = respects(A, G.relation("O"))
    assert not ok and witness == ((0, 0, 0),)


def test_gf2_fixture_affaut_trivial():
    assert len(affaut(gf2_fixture())) == 1


def test_frame_map():
    A = frame_map(GF3, (1, 1), [(2, 1), (1, 2)])
    assert A.apply((0, 0)) == (1, 1)
    assert A.apply((1, 0)) == (2, 1)
    assert A.apply((0, 1)) == (1, 2)
    with pytest.raises(DependentFrame):
        frame_map(GF3, (0, 0), [(1, 1), (2, 2)])


matrices = st.tuples(*[st.integers(0, 2)] * 6)


def _map(vals):
    a, b, c, d, s, t = vals
    try:
        return AffineMap(GF3, ((a, b), (c, d)), (s, t))
    except SingularLinearPart:
        return None


@settings(max_examples=100)
@given(matrices, matrices)
def test_composition_and_inverse(u, v):
    A, B = _map(u), _map(v)
    if A is None or B is None:
        return
    S = PointSpace(GF3, 2)
    assert np.array_equal(A.compose(B).perm(S), A.perm(S)[B.perm(S)])
    assert A.compose(A.inverse()).is_identity()
    assert affine_from_perm(S, A.perm(S)) == A


def test_mat_inverse():
    L = ((1, 1), (0, 1))
    Li = mat_inverse(GF3, L)
    assert tuple(map(tuple, Li)) == ((1, 2), (0, 1))


def test_affine_from_non_affine():
    S = PointSpace(GF3, 2)
    p = np.arange(9)
    p[[4, 5]] = [5, 4]
    assert affine_from_perm(S, p) is None


def test_affaut_with_lambda_gf3():
    G = standard_geometry("gf(3)", 2, ("lambda",))
    group = affaut(G)
    assert len(group) == 72
    for A in group:
        assert respects(A, G.relation("lambda"))[0]


def test_encode():
    assert AffineMap(GF3, ((1, 2), (0, 1)), (2, 0)).encode() == "1 2 0 1;2 0"
