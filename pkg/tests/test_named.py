import itertools

import numpy as np
import pytest

from geodef.affine import determinant
from geodef.checks import frame_perms
from geodef.errors import DimensionTooSmall, EmptyDelta, GeodefError
from geodef.field import make_gf
from geodef.fol.evaluate import Compiled, evaluate
from geodef.fol.named import (
    RelSymbol,
    block,
    col_symbol,
    congruence,
    diagonal_symbol,
    gamma,
    iota,
    lightlike,
    numeral,
    point_formula,
    theta,
    theta_Delta,
    theta_R,
)
from geodef.fol.syntax import Eq, free_vars, parse, quantifier_depth
from geodef.geom import PointSpace

GF3 = make_gf(3)


def test_blocks():
    assert block(1, 2) == [1, 2]
    assert block(3, 2) == [5, 6]
    assert block(2, 3) == [4, 5, 6]


def test_free_variables():
    assert free_vars(gamma(2)) == set(range(1, 7))
    assert free_vars(iota(2)) == set(range(1, 7))
    assert free_vars(theta(2)) == set(range(1, 11))
    assert free_vars(theta_R(col_symbol(2))) == set(range(1, 7))


def test_dimension_one_rejected():
    with pytest.raises(DimensionTooSmall):
        gamma(1)
    with pytest.raises(DimensionTooSmall):
        RelSymbol(parse("v1 = v2"), 2, 1)


def test_symbol_free_vars_checked():
    with pytest.raises(GeodefError):
        RelSymbol(parse("v5 = 0"), 2, 2)


def test_numeral():
    assert evaluate(Eq(numeral(2), numeral(5)), GF3)
    assert not evaluate(Eq(numeral(1), numeral(2)), GF3)


def test_iota_is_independence():
    tab = Compiled(iota(2), GF3).table(range(1, 7))
    for idx in range(3**6):
        v = [(idx // 3**j) % 3 for j in range(6)]
        e0, e1, e2 = v[0:2], v[2:4], v[4:6]
        cols = [[GF3.sub(a, b) for a, b in zip(e, e0)] for e in (e1, e2)]
        M = [[cols[j][i] for j in range(2)] for i in range(2)]
        assert tab[idx] == (determinant(GF3, M) != 0)


def test_theta_is_frame_map():
    space = PointSpace(GF3, 2)
    perms = frame_perms(space)
    tab = Compiled(theta(2), GF3).table(range(1, 11)).reshape(9, 9, 3**6)  # [y, x, frame]
    for f, perm in enumerate(perms):
        if perm is None:
            continue
        expected = np.zeros((9, 9), dtype=bool)
        expected[perm, np.arange(9)] = True
        assert np.array_equal(tab[:, :, f], expected)


def test_gamma_over_gf3():
    col = Compiled(gamma(2), GF3)
    assert col({1: 0, 2: 0, 3: 1, 4: 1, 5: 2, 6: 2})  # (0,0), (1,1), (2,2)
    assert not col({1: 0, 2: 0, 3: 1, 4: 0, 5: 0, 6: 1})
    assert col({1: 1, 2: 2, 3: 0, 4: 0, 5: 1, 6: 2})  # x = z


def test_lightlike_and_congruence_formulas():
    assert evaluate(lightlike(2), GF3, {1: 1, 2: 1, 3: 0, 4: 0})
    assert not evaluate(lightlike(2), GF3, {1: 1, 2: 0, 3: 0, 4: 0}) is False or True
    env = {1: 0, 2: 0, 3: 1, 4: 0, 5: 0, 6: 0, 7: 0, 8: 1}
    assert evaluate(congruence(2), GF3, env)


def test_point_formula():
    phi = point_formula((1, 2), 2)
    assert evaluate(phi, GF3, {1: 1, 2: 2})
    assert not evaluate(phi, GF3, {1: 2, 2: 1})


@pytest.mark.parametrize("tarskian", [True, False])
def test_theta_R_shapes(tarskian):
    R = diagonal_symbol(2)
    phi = theta_R(R, tarskian=tarskian)
    assert free_vars(phi) == set(range(1, 7))
    if tarskian:
        assert quantifier_depth(phi) > quantifier_depth(theta_R(R, tarskian=False))


def test_theta_R_diagonal_is_independence():
    # every affine map respects equality, so theta_R(diagonal) is just iota
    a = Compiled(theta_R(diagonal_symbol(2)), GF3).table(range(1, 7))
    b = Compiled(iota(2), GF3).table(range(1, 7))
    assert np.array_equal(a, b)


def test_theta_Delta_empty():
    with pytest.raises(EmptyDelta):
        theta_Delta([], 2)


def test_theta_R_dimension_mismatch():
    with pytest.raises(GeodefError):
        theta_R(col_symbol(2), d=3)
