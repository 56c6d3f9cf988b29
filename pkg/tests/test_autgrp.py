import numpy as np
import pytest

from geodef.affine import affine_group_order
from geodef.autgrp import (
    brute_force_aut,
    decompose,
    fundamental_group,
    induced_group,
    induced_point_group,
    is_automorphism,
)
from geodef.checks import standard_geometry
from geodef.errors import CapacityExceeded, NoDecomposition, NotAnAutomorphism, UniverseMismatch
from geodef.field import make_gf
from geodef.geom import gf2_fixture


def test_gf2_fixture_full_group():
    G = gf2_fixture()
    aut = brute_force_aut(G)
    assert len(aut) == 24  # any permutation of the four uncolored points
    assert aut.is_group()


def test_three_cycle_has_no_decomposition():
    G = gf2_fixture()
    idx = [G.space.index(p) for p in [(1, 1, 0), (1, 0, 1), (0, 1, 1)]]
    alpha = np.arange(8)
    alpha[idx] = idx[1:] + idx[:1]
    assert is_automorphism(alpha, G)
    with pytest.raises(NoDecomposition):
        decompose(alpha, G)


def test_not_an_automorphism():
    G = gf2_fixture()
    alpha = np.arange(8)
    alpha[[0, 7]] = [7, 0]
    with pytest.raises(NotAnAutomorphism):
        decompose(alpha, G)
    with pytest.raises(UniverseMismatch):
        decompose(np.arange(9), G)


@pytest.mark.parametrize("spec,size", [("gf(3)", 432), ("gf(4)", 5760)])
def test_aut_is_affine_times_frobenius(spec, size):
    G = standard_geometry(spec, 2)
    aut = brute_force_aut(G)
    assert len(aut) == size
    assert aut == fundamental_group(G.space)


def test_decomposition_gf4():
    G = standard_geometry("gf(4)", 2)
    aut = brute_force_aut(G)
    counts = {0: 0, 1: 0}
    for alpha in aut.perms[::97]:
        A, phi = decompose(alpha, G)
        ind = induced_group(G.field, 2)[phi.exponent]
        assert np.array_equal(A.perm(G.space)[ind.perm], alpha)
        counts[phi.exponent] += 1
    assert counts[0] and counts[1]


def test_induced_group():
    F = make_gf(2, 2)
    assert len(induced_point_group(F, 2)) == 2
    frob = induced_group(F, 2)[1]
    assert frob((2, 3)) == (3, 2)


def test_capacity():
    with pytest.raises(CapacityExceeded):
        brute_force_aut(standard_geometry("gf(7)", 2))
