import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mckay3.errors import InvalidTheta, NotGeneric, PatternInfeasible
from mckay3.group import new_group, valid_groups
from mckay3.kempf_ness import gauge_act
from mckay3.quiver import (
    Constellation,
    StabilityParam,
    enumerate_fixed_points,
    invariant_subsets,
    is_generic,
    is_theta_semistable,
    is_theta_stable,
    orbit_constellation,
    parse_theta,
    random_constellation,
    random_theta,
    relation_residual,
    satisfies_path_exchange,
)


def brute_generic(theta):
    r = theta.order
    return all(
        sum(theta.values[k] for k in S) != 0
        for size in range(1, r)
        for S in itertools.combinations(range(r), size)
    )


def closure_invariant(B, S, tol=1e-12):
    """Fixpoint check written against the arrow list, independent of the bitmask code."""
    G = B.group
    mag = np.abs(B.b)
    big = mag.max() if mag.any() else 0
    for k in S:
        for a in (1, 2, 3):
            v = mag[k, a - 1]
            if v != 0 and v > tol * big and (k + G.weights[a - 1]) % G.order not in S:
                return False
    return True


def test_parse_theta():
    assert parse_theta("-2,1,1").values == (-2, 1, 1)
    assert parse_theta("−1/2, 1/2, 0").values == (Fraction(-1, 2), Fraction(1, 2), 0)
    with pytest.raises(InvalidTheta):
        parse_theta("1,1,1")
    with pytest.raises(InvalidTheta):
        parse_theta("-1,1", order=3)


def test_is_generic_examples():
    assert is_generic(StabilityParam.of([-2, 1, 1]))
    v = is_generic(StabilityParam.of([-1, 1, 0]))
    assert not v and v.witness == frozenset({2})
    assert is_generic(StabilityParam.of([-4, 1, 1, 1, 1]))


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 8).flatmap(lambda r: st.lists(st.integers(-3, 3), min_size=r - 1, max_size=r - 1)))
def test_is_generic_matches_brute_force(head):
    theta = StabilityParam.of(head + [-sum(head)])
    verdict = is_generic(theta)
    assert bool(verdict) == brute_generic(theta)
    if not verdict:
        assert theta(verdict.witness) == 0 and 0 < len(verdict.witness) < theta.order


def test_relation_residual_examples(g3):
    assert relation_residual(orbit_constellation(g3, [1 + 2j, -0.5, 3j])) == 0
    assert relation_residual(Constellation.zeros(g3)) == 0
    B = Constellation.from_arrows(g3, {(0, 1): 1, (1, 2): 1})
    assert relation_residual(B) == 1


def test_invariant_subsets_examples(g3):
    full = frozenset(range(3))
    B = orbit_constellation(g3, [1, 1, 1])
    assert invariant_subsets(B) == [frozenset(), full]
    assert len(invariant_subsets(Constellation.zeros(g3))) == 8
    b = B.b.copy()
    b[:, 2] = 0
    assert invariant_subsets(Constellation(g3, b)) == [frozenset(), full]


@pytest.mark.parametrize("G", valid_groups(7)[::3], ids=str)
def test_invariant_subsets_lattice_and_oracle(G):
    for seed in range(20):
        B = random_constellation(G, seed, zero_prob=0.3)
        subsets = set(invariant_subsets(B))
        for mask in range(1 << G.order):
            S = frozenset(k for k in range(G.order) if mask >> k & 1)
            assert (S in subsets) == closure_invariant(B, S)
        for S, T in itertools.product(subsets, repeat=2):
            assert S | T in subsets and S & T in subsets


def test_support_tolerance(g3):
    B = Constellation.from_arrows(g3, {(0, 1): 1.0, (1, 1): 1e-14})
    assert invariant_subsets(B, tol=1e-12) != invariant_subsets(B, tol=0)
    assert invariant_subsets(B, tol=None) == invariant_subsets(B, tol=0)


def test_stability_examples(g5):
    B = orbit_constellation(g5, [1, 2, 3])
    theta = StabilityParam.of([-4, 1, 1, 1, 1])
    assert is_theta_stable(B, theta)
    assert is_theta_stable(B, StabilityParam.of([0] * 5))
    v = is_theta_stable(Constellation.zeros(g5), theta)
    assert not v and theta(v.witness) < 0
    assert not is_theta_semistable(Constellation.zeros(g5), theta)


@pytest.mark.parametrize("G", [G for G in valid_groups(7) if G.order > 2][::4], ids=str)
def test_semistable_iff_stable_for_generic(G):
    rng = np.random.default_rng(G.order)
    done = 0
    while done < 1000:
        theta = random_theta(G.order, rng)
        if not is_generic(theta):
            continue
        B = random_constellation(G, int(rng.integers(1 << 30)), zero_prob=float(rng.choice([0.0, 0.1, 0.3])))
        st_, ss = is_theta_stable(B, theta), is_theta_semistable(B, theta)
        assert bool(st_) == bool(ss)
        done += 1


def test_stable_implies_semistable_nongeneric(g3):
    theta = StabilityParam.of([-1, 1, 0])
    for seed in range(50):
        B = random_constellation(g3, seed, zero_prob=0.4)
        if is_theta_stable(B, theta):
            assert is_theta_semistable(B, theta)


def test_random_constellation_contract(g7):
    B = random_constellation(g7, 11)
    assert relation_residual(B) == 0
    assert np.array_equal(B.b, random_constellation(g7, 11).b)
    for seed in range(5):
        theta = random_theta(7, np.random.default_rng(seed))
        assert is_theta_stable(B, theta)
    flavor3 = [(k, 3) for k in range(7)]
    assert relation_residual(random_constellation(g7, 11, zero_pattern=flavor3)) == 0
    with pytest.raises(PatternInfeasible):
        random_constellation(g7, 11, zero_pattern=[(0, 1)])


def test_random_patterns_respect_relations(g7):
    for seed in range(30):
        B = random_constellation(g7, seed, zero_prob=0.25)
        assert relation_residual(B) == 0
        assert satisfies_path_exchange(g7, B.support(None))


@pytest.mark.parametrize("G", valid_groups(7)[::5], ids=str)
def test_gauge_invariance(G):
    rng = np.random.default_rng(0)
    for seed in range(10):
        B = random_constellation(G, seed, zero_prob=0.2)
        theta = random_theta(G.order, rng)
        gB = gauge_act(rng.normal(size=G.order), B)
        assert invariant_subsets(gB) == invariant_subsets(B)
        assert bool(is_theta_stable(gB, theta)) == bool(is_theta_stable(B, theta))
        assert relation_residual(gB) < 1e-12


def test_fixed_points_examples():
    G = new_group(3, 1, 1, 1)
    points = enumerate_fixed_points(G, StabilityParam.of([-2, 1, 1]))
    assert len(points) == 3
    # G-Hilb chamber: each fixed point is a path 0 -> 1 -> 2 along one flavor.
    assert {p.support for p in points} == {((0, a), (1, a)) for a in (1, 2, 3)}
    assert len(enumerate_fixed_points(new_group(5, 1, 2, 2), StabilityParam.of([-4, 1, 1, 1, 1]))) == 5
    with pytest.raises(NotGeneric):
        enumerate_fixed_points(G, StabilityParam.of([-1, 1, 0]))


def test_fixed_points_are_stable_relation_preserving(g5):
    theta = StabilityParam.of([7, -3, 2, -11, 5])
    assert is_generic(theta)
    for p in enumerate_fixed_points(g5, theta):
        B = p.constellation()
        assert relation_residual(B) == 0
        assert is_theta_stable(B, theta)
        assert p.to_json() == sorted(p.to_json())


@pytest.mark.parametrize("G", [G for G in valid_groups(7) if G.order >= 3], ids=str)
def test_fixed_point_count_equals_order(G):
    rng = np.random.default_rng(G.order * 100 + sum(G.weights))
    done = 0
    while done < 100:
        theta = random_theta(G.order, rng)
        if not is_generic(theta):
            continue
        assert len(enumerate_fixed_points(G, theta)) == G.order, str(theta)
        done += 1
