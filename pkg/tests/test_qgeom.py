from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodef.affine import AffineMap
from geodef.field import QQ
from geodef.qgeom import (
    MAP_KINDS,
    QForm,
    bw,
    bw_int,
    bw_respected_on,
    col,
    col_from_bw,
    cong,
    find_cong_violation,
    find_lightlike_violation,
    lightlike,
    parse_affine,
    random_affine,
    random_triples,
    respects_bw,
    respects_cong,
    respects_lightlike,
)

F = Fraction


def test_relations():
    assert bw((0, 0), (F(1, 2), F(1, 2)), (1, 1))
    assert not bw((0, 0), (2, 2), (1, 1))
    assert col((0, 0), (2, 2), (1, 1))
    assert cong((0, 0), (3, 4), (5, 0), (0, 0))
    assert lightlike((0, 0), (1, 1)) and not lightlike((0, 0), (1, 2))


small = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=300)
@given(small, small, small)
def test_col_from_bw(p, q, r):
    assert col_from_bw(p, q, r) == col(p, q, r)


@settings(max_examples=300)
@given(small, small, small)
def test_bw_int_matches_exact(p, q, r):
    u = np.array([q[0] - p[0], q[1] - p[1]])
    w = np.array([r[0] - p[0], r[1] - p[1]])
    assert bool(bw_int(u, w)) == bw(p, q, r)


def test_qform():
    eta = QForm.minkowski(2)
    assert eta.value((1, 1)) == 0 and eta.value((2, 1)) == 3
    L = ((F(5, 4), F(3, 4)), (F(3, 4), F(5, 4)))  # Lorentz boost
    assert eta.pullback(L).ratio(eta) == 1
    assert QForm.identity(2).pullback(((2, 0), (0, 2))).ratio(QForm.identity(2)) == 4


def test_criteria_on_named_maps():
    rot = AffineMap(QQ, ((F(3, 5), F(-4, 5)), (F(4, 5), F(3, 5))), (1, 2))
    boost = AffineMap(QQ, ((F(5, 4), F(3, 4)), (F(3, 4), F(5, 4))), (0, 0))
    shear = AffineMap(QQ, ((1, 1), (0, 1)), (0, 0))
    assert respects_bw(shear)
    assert respects_cong(rot) and not respects_cong(boost)
    assert respects_lightlike(boost) and not respects_lightlike(rot)
    assert find_cong_violation(rot) is None and find_cong_violation(boost) is not None
    assert find_lightlike_violation(boost) is None and find_lightlike_violation(shear) is not None


@pytest.mark.parametrize("kind", MAP_KINDS)
def test_samplers_agree_with_criteria(kind):
    rng = np.random.default_rng(5)
    for _ in range(20):
        A = random_affine(rng, 2, kind)
        assert (find_cong_violation(A, budget=2000) is None) == respects_cong(A)
        assert (find_lightlike_violation(A, budget=2000) is None) == respects_lightlike(A)


def test_bw_preserved():
    rng = np.random.default_rng(9)
    triples = random_triples(rng, 2, 500)
    assert bw_int(triples[:, 1] - triples[:, 0], triples[:, 2] - triples[:, 0]).any()
    for _ in range(10):
        assert bw_respected_on(random_affine(rng, 2), triples)


def test_parse_affine():
    A = parse_affine("1 1/2\n0 1\n3 -1")
    assert A.L == ((1, F(1, 2)), (0, 1)) and A.t == (3, -1)
