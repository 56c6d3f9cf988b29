import itertools

import numpy as np
import pytest

from geodef.errors import UniverseMismatch
from geodef.groups import PointGroup, compose, compose_groups, identity, inverse

S3 = [list(p) for p in itertools.permutations(range(3))]


def test_compose_convention():
    a = np.array([1, 2, 0])
    b = np.array([0, 2, 1])
    # (a o b)(x) = a(b(x))
    assert compose(a, b).tolist() == [a[b[x]] for x in range(3)]
    assert compose(a, inverse(a)).tolist() == identity(3).tolist()


def test_point_group_dedup_and_membership():
    G = PointGroup(S3 + S3)
    assert len(G) == 6
    assert [2, 0, 1] in G and [0, 1] not in G
    assert G.is_group() and G.has_identity()
    assert len(G.generators()) <= 2


def test_subgroup_relations():
    G = PointGroup(S3)
    C = PointGroup([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    assert C < G and G > C and C <= C
    assert len(G.difference(C)) == 3
    assert G.intersection(C) == C
    with pytest.raises(UniverseMismatch):
        G.issubset(PointGroup([[0, 1]]))


def test_not_a_group():
    T = PointGroup([[0, 1, 2], [1, 2, 0]])
    assert not T.is_group()
    with pytest.raises(ValueError):
        T.generators()


def test_compose_groups():
    C = PointGroup([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    T = PointGroup([[0, 1, 2], [0, 2, 1]])
    assert compose_groups(C, T) == PointGroup(S3)
