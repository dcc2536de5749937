import cmath
import math
from fractions import Fraction

import pytest

from conftest import zeta
from mckay3.eta import det_one_minus, eta_float, eta_invariant, eta_table
from mckay3.group import CyclotomicNumber, character, valid_groups

SWEEP = valid_groups(13)


def float_oracle(G, d):
    """Direct complex summation, written independently of eta_float."""
    r = G.order
    total = 0
    for j in range(1, r):
        den = math.prod(1 - zeta(r, j * w) for w in G.weights)
        total += zeta(r, d * j) / den
    return (-2 / r * total).real


def test_eta_invariant_examples(g3):
    trivial = lambda j: CyclotomicNumber.from_rational(3, 1)
    assert eta_invariant(g3, trivial) == 0
    assert eta_invariant(g3, lambda j: character(g3, 1, j)) == Fraction(2, 9)
    assert eta_invariant(g3, lambda j: character(g3, 2, j)) == Fraction(-2, 9)
    assert abs(float_oracle(g3, 1) - 2 / 9) < 1e-12


def test_eta_table_example(g3):
    table = eta_table(g3)
    assert table.by_difference == {0: 0, 1: Fraction(2, 9), 2: Fraction(-2, 9)}
    assert table.to_json() == {"group": "1/3(1,1,1)", "eta": {"0": "0/1", "1": "2/9", "2": "-2/9"}}


def test_det_one_minus_is_alternating_character_sum(g7):
    for j in range(1, 7):
        alt = 1 - sum(zeta(7, j * w) for w in g7.weights) + sum(
            zeta(7, j * (a + b)) for a, b in ((1, 2), (1, 4), (2, 4))
        ) - 1
        assert abs(det_one_minus(g7, j).to_complex() - alt) < 1e-12


@pytest.mark.parametrize("G", SWEEP, ids=str)
def test_table_soundness(G):
    table = eta_table(G)
    r = G.order
    for d in range(r):
        exact = table.by_difference[d]
        assert isinstance(exact, Fraction)
        assert table.by_difference[(-d) % r] == -exact
        oracle = float_oracle(G, d)
        assert abs(float(exact) - oracle) <= 1e-9 * max(abs(oracle), 1.0)
        assert abs(eta_float(G, d) - oracle) < 1e-12
    bound = 2 * max(1 / abs(det_one_minus(G, j).to_complex()) for j in range(1, r))
    assert all(abs(float(v)) <= bound + 1e-12 for v in table.by_difference.values())


def test_pair_view_diagonal_is_eta0(g7):
    table = eta_table(g7)
    view = table.pair_view
    assert all(view[k][k] == table.by_difference[0] for k in range(7))
    assert view[3][1] == table.by_difference[2]
