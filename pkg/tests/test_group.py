import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import zeta
from mckay3.errors import DeterminantNotOne, DivisionByZero, InvalidGroup, NotFree, NotPrime
from mckay3.group import (
    CyclotomicNumber,
    character,
    cyc_add,
    cyc_inv,
    cyc_mul,
    format_fraction,
    is_rational,
    new_group,
    parse_group,
    valid_groups,
)


def test_new_group_examples():
    G = new_group(3, 1, 1, 1)
    assert G.order == 3 and G.weights == (1, 1, 1)
    assert new_group(7, 1, 2, 4).label == "1/7(1,2,4)"
    with pytest.raises(NotFree):
        new_group(2, 1, 1, 0)


def test_new_group_reduces_weights():
    assert new_group(5, 6, -3, 2).weights == (1, 2, 2)


@pytest.mark.parametrize(
    "args, exc",
    [((4, 1, 1, 2), NotPrime), ((1, 1, 1, 1), NotPrime), ((5, 1, 1, 1), DeterminantNotOne), ((5, 0, 2, 3), NotFree)],
)
def test_new_group_rejects(args, exc):
    with pytest.raises(exc):
        new_group(*args)


def test_validation_exhaustive_scan():
    def brute(r, w):
        prime = r > 1 and all(r % d for d in range(2, r))
        return prime and sum(w) % r == 0 and all(x % r for x in w)

    for r in range(1, 14):
        for w in itertools.product(range(r), repeat=3):
            try:
                new_group(r, *w)
                accepted = True
            except InvalidGroup:
                accepted = False
            assert accepted == brute(r, w), (r, w)


def test_valid_groups_matches_scan():
    listed = {(G.order, G.weights) for G in valid_groups(13)}
    scanned = set()
    for r in range(2, 14):
        for w in itertools.product(range(1, r), repeat=3):
            try:
                G = new_group(r, *w)
            except InvalidGroup:
                continue
            scanned.add((G.order, G.weights))
    assert listed == scanned


def test_parse_group_literal():
    assert parse_group("1/7(1,2,4)") == new_group(7, 1, 2, 4)
    assert parse_group(" 1/5( 1, 2, 2 ) ") == new_group(5, 1, 2, 2)
    with pytest.raises(InvalidGroup):
        parse_group("Z/7")
    with pytest.raises(NotFree):
        parse_group("1/2(1,1,0)")


def test_equivalent_presentations_include_self():
    G = new_group(7, 1, 2, 4)
    pres = G.equivalent_presentations()
    assert G.weights in pres
    assert (2, 4, 1) in pres  # generator g^2
    assert G.weights == (1, 2, 4)  # not canonicalized


def test_character_examples():
    assert character(new_group(3, 1, 1, 1), 0, 2) == CyclotomicNumber.from_rational(3, 1)
    z = CyclotomicNumber.zeta_power(3, 1)
    assert character(new_group(3, 1, 1, 1), 1, 1) == z
    value = character(new_group(3, 1, 1, 1), 2, 2)
    assert value == z
    assert abs(value.to_complex() - zeta(3, 4)) < 1e-12


@pytest.mark.parametrize("G", valid_groups(13)[::7], ids=str)
def test_character_inverse_pairs_and_float_agreement(G):
    r = G.order
    for k in range(r):
        for j in range(r):
            assert character(G, k, j) * character(G, (r - k) % r, j) == 1
            assert abs(character(G, k, j).to_complex() - zeta(r, k * j)) < 1e-12


def test_arithmetic_examples():
    z3 = CyclotomicNumber.zeta_power(3, 1)
    assert cyc_mul(z3, z3 * z3) == 1
    prod = (1 - z3) * (1 - z3 * z3)
    assert prod == 3
    assert abs(prod.to_complex() - (1 - zeta(3)) * (1 - zeta(3, 2))) < 1e-12
    z5 = CyclotomicNumber.zeta_power(5, 1)
    assert cyc_inv(1 - z5) * (1 - z5) == 1
    with pytest.raises(DivisionByZero):
        cyc_inv(CyclotomicNumber.from_rational(5, 0))


def test_is_rational_examples():
    assert is_rational(CyclotomicNumber(3, (Fraction(3), Fraction(0)))) == 3
    assert is_rational(CyclotomicNumber.zeta_power(3, 1)) is None
    one_plus = CyclotomicNumber.from_coeffs(3, [1, 1, 1])
    assert is_rational(one_plus) == 0


def test_format_fraction():
    assert format_fraction(Fraction(-4, 6)) == "-2/3"
    assert format_fraction(0) == "0/1"


PRIMES = [2, 3, 5, 7, 11, 13]


@st.composite
def field_elements(draw, r, count):
    frac = st.fractions(min_value=-5, max_value=5, max_denominator=7)
    return [CyclotomicNumber(r, tuple(draw(st.lists(frac, min_size=r - 1, max_size=r - 1)))) for _ in range(count)]


@st.composite
def triples(draw):
    r = draw(st.sampled_from(PRIMES))
    return r, draw(field_elements(r, 3))


@settings(max_examples=60, deadline=None)
@given(triples())
def test_field_axioms(data):
    r, (a, b, c) = data
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert cyc_add(a, -a) == 0
    if a:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@settings(max_examples=40, deadline=None)
@given(triples())
def test_multiplication_matches_complex_evaluation(data):
    r, (a, b, _) = data
    assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-9 * (1 + abs(a.to_complex() * b.to_complex()))


@settings(max_examples=40, deadline=None)
@given(triples(), st.integers(min_value=1, max_value=12))
def test_galois_is_a_ring_map(data, j):
    r, (a, b, _) = data
    if j % r == 0:
        return
    assert (a * b).galois(j) == a.galois(j) * b.galois(j)
    assert (a + b).galois(j) == a.galois(j) + b.galois(j)
    assert a.mul_zeta(j) == a * CyclotomicNumber.zeta_power(r, j)
