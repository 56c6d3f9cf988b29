import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geodef.errors import NotPrime, ReducibleModulus, ZeroDenominator
from geodef.field import QQ, FieldAutomorphism, frobenius_group, is_irreducible, make_gf, parse_field_spec, rat

SMALL = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]


def test_gf3_arithmetic():
    F = make_gf(3)
    assert F.add(1, 2) == 0
    assert F.mul(2, 2) == 1
    assert F.neg(1) == 2


def test_gf4_default_modulus():
    F = make_gf(2, 2)
    assert F.modulus == (1, 1, 1)  # x^2 + x + 1, constant term first
    w = 2
    assert list(F.elements) == [0, 1, 2, 3]
    assert F.mul(w, w) == F.add(w, 1)


def test_not_prime():
    with pytest.raises(NotPrime):
        make_gf(4, 1)


def test_reducible_modulus():
    with pytest.raises(ReducibleModulus):
        make_gf(2, 2, modulus=(1, 0, 1))  # x^2 + 1 = (x + 1)^2


def test_default_modulus_is_smallest_irreducible():
    for p, k in [(2, 2), (2, 3), (3, 2)]:
        F = make_gf(p, k)
        for coeffs in itertools.product(range(p), repeat=k):
            cand = tuple(coeffs) + (1,)
            # compare as polynomials read from the leading coefficient down
            if cand[::-1] < F.modulus[::-1]:
                assert not is_irreducible(cand, p)


@pytest.mark.parametrize("p,k", SMALL)
def test_field_axioms(p, k):
    F = make_gf(p, k)
    E = list(F.elements)
    assert len(set(E)) == F.q == p**k
    for a in E:
        assert F.add(a, 0) == a and F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    for a, b in itertools.product(E, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
    if F.q <= 9:
        for a, b, c in itertools.product(E, repeat=3):
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
            assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        make_gf(5).inv(0)


@pytest.mark.parametrize("p,k", SMALL)
def test_automorphisms_are_field_maps(p, k):
    F = make_gf(p, k)
    for alpha in frobenius_group(F):
        assert alpha(0) == 0 and alpha(1) == 1
        assert sorted(alpha.table) == list(F.elements)
        for a, b in itertools.product(F.elements, repeat=2):
            assert alpha(F.add(a, b)) == F.add(alpha(a), alpha(b))
            assert alpha(F.mul(a, b)) == F.mul(alpha(a), alpha(b))


def test_frobenius_examples():
    assert len(frobenius_group(make_gf(3))) == 1
    gf4 = frobenius_group(make_gf(2, 2))
    assert len(gf4) == 2 and gf4[0].is_identity
    assert gf4[1](2) == 3  # omega -> omega + 1
    gf9 = make_gf(3, 2)
    sigma = frobenius_group(gf9)[1]
    assert all(sigma(a) == gf9.power(a, 3) for a in gf9.elements)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2)])
def test_frobenius_group_is_cyclic(p, k):
    F = make_gf(p, k)
    group = frobenius_group(F)
    gen = group[1]
    power = FieldAutomorphism(F, 0)
    seen = []
    for _ in range(k):
        seen.append(power.exponent)
        power = power.compose(gen)
    assert sorted(seen) == list(range(k)) and power.is_identity
    for a in group:
        assert a.compose(a.inverse()).is_identity


def test_rationals():
    assert rat(2, 4) == Fraction(1, 2)
    assert rat(1, 3) + rat(1, 6) == rat(1, 2)
    with pytest.raises(ZeroDenominator):
        rat(1, 0)
    assert QQ.le(rat(1, 3), rat(1, 2))
    assert QQ.inv(rat(-2, 3)) == rat(-3, 2)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_rationals_match_integers(a, b):
    assert rat(a) + rat(b) == a + b
    assert rat(a) * rat(b) == a * b
    assert (rat(a) <= rat(b)) == (a <= b)


def test_field_specs():
    assert parse_field_spec("gf(4)") == make_gf(2, 2)
    assert parse_field_spec("GF(2^3)") == make_gf(2, 3)
    assert parse_field_spec("gf(7)") == make_gf(7)
    assert parse_field_spec("Q") is QQ
    with pytest.raises(NotPrime):
        parse_field_spec("gf(6)")
