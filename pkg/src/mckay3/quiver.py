"""G-constellations as representations of the McKay quiver with dimension vector (1,...,1).

Vertex k carries the character k; arrow (k, alpha) goes k -> k + w_alpha and
stands for multiplication by the coordinate x_alpha. Subrepresentations of the
regular representation are vertex subsets, and a subset is B-invariant when it
is closed under the nonzero arrows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidTheta, NotGeneric, PatternInfeasible
from .group import GroupAction, format_fraction, parse_fraction
from .linalg import exact_rank

__all__ = [
    "StabilityParam",
    "Constellation",
    "FixedPoint",
    "Verdict",
    "parse_theta",
    "random_theta",
    "is_generic",
    "relation_residual",
    "relation_pairs",
    "invariant_subsets",
    "is_theta_stable",
    "is_theta_semistable",
    "random_constellation",
    "orbit_constellation",
    "satisfies_path_exchange",
    "enumerate_fixed_points",
    "arrow_index",
    "arrow_of",
    "DEFAULT_SUPPORT_TOL",
]

DEFAULT_SUPPORT_TOL = 1e-12
MAX_SUBSET_ORDER = 13
MAX_SUPPORT_ORDER = 7


def arrow_index(k: int, alpha: int) -> int:
    """Flat index of arrow (k, alpha), alpha in {1, 2, 3}."""
    return 3 * k + (alpha - 1)


def arrow_of(index: int) -> tuple[int, int]:
    return index // 3, index % 3 + 1


def _mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def _set_to_mask(S: Iterable[int]) -> int:
    m = 0
    for k in S:
        m |= 1 << k
    return m


@dataclass(frozen=True)
class Verdict:
    """A boolean answer together with an optional witness subset."""

    ok: bool
    witness: Optional[frozenset[int]] = None

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# Stability parameters


@dataclass(frozen=True)
class StabilityParam:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if sum(self.values, Fraction(0)) != 0:
            raise InvalidTheta(f"theta must sum to zero, got sum {sum(self.values)}")

    @classmethod
    def of(cls, values: Iterable) -> "StabilityParam":
        return cls(tuple(Fraction(v) for v in values))

    @property
    def order(self) -> int:
        return len(self.values)

    def __call__(self, S: Iterable[int]) -> Fraction:
        return sum((self.values[k] for k in S), Fraction(0))

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values)

    def as_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])

    def to_json(self) -> list[str]:
        return [format_fraction(v) for v in self.values]


def parse_theta(text: str, order: Optional[int] = None) -> StabilityParam:
    """Parse ``"-2,1,1"`` (entries may be rationals such as ``1/2``)."""
    try:
        values = tuple(parse_fraction(p) for p in text.split(",") if p.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidTheta(f"cannot parse theta {text!r}: {exc}") from None
    if order is not None and len(values) != order:
        raise InvalidTheta(f"theta has {len(values)} entries, expected {order}")
    return StabilityParam(values)


def random_theta(r: int, rng: np.random.Generator, bound: int = 10) -> StabilityParam:
    """Random integer theta with sum zero (not necessarily generic)."""
    head = [int(v) for v in rng.integers(-bound, bound + 1, size=r - 1)]
    return StabilityParam.of(head + [-sum(head)])


@lru_cache(maxsize=None)
def _subset_masks(r: int) -> np.ndarray:
    return np.arange(1 << r, dtype=np.int64)


@lru_cache(maxsize=None)
def _membership(r: int) -> np.ndarray:
    """Boolean matrix (2^r, r): row S, column k is k in S."""
    masks = _subset_masks(r)
    return ((masks[:, None] >> np.arange(r)) & 1).astype(bool)


def _subset_values(theta: StabilityParam) -> list[Fraction]:
    r = theta.order
    vals = [Fraction(0)] * (1 << r)
    for mask in range(1, 1 << r):
        low = mask & -mask
        vals[mask] = vals[mask ^ low] + theta.values[low.bit_length() - 1]
    return vals


def is_generic(theta: StabilityParam) -> Verdict:
    """Generic iff theta(S) != 0 for every nonempty proper vertex subset S."""
    r = theta.order
    if r > MAX_SUBSET_ORDER + 7:
        raise ValueError(f"subset scan over 2^{r} subsets is beyond desk scale")
    vals = _subset_values(theta)
    full = (1 << r) - 1
    # Smallest witnesses first.
    for mask in sorted(range(1, full), key=lambda m: (bin(m).count("1"), m)):
        if vals[mask] == 0:
            return Verdict(False, _mask_to_set(mask))
    return Verdict(True)


# ---------------------------------------------------------------------------
# Constellations


@dataclass(frozen=True, eq=False)
class Constellation:
    """Arrow values b[k, alpha - 1] of a McKay-quiver representation."""

    group: GroupAction
    b: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.b, dtype=complex)
        if arr.shape != (self.group.order, 3):
            raise ValueError(f"expected arrow array of shape ({self.group.order}, 3), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "b", arr)

    def head(self, k: int, alpha: int) -> int:
        return (k + self.group.weights[alpha - 1]) % self.group.order

    def support(self, tol: Optional[float] = DEFAULT_SUPPORT_TOL) -> np.ndarray:
        """Boolean (r, 3) mask of nonzero arrows; tol is relative to max |b|."""
        mag = np.abs(self.b)
        nz = mag != 0
        if tol is None or not nz.any():
            return nz
        return nz & (mag > tol * mag.max())

    @classmethod
    def zeros(cls, G: GroupAction) -> "Constellation":
        return cls(G, np.zeros((G.order, 3), dtype=complex))

    @classmethod
    def from_arrows(cls, G: GroupAction, values: dict) -> "Constellation":
        """Build from ``{(k, alpha): value}``; unspecified arrows are zero."""
        b = np.zeros((G.order, 3), dtype=complex)
        for (k, alpha), v in values.items():
            b[k % G.order, alpha - 1] = v
        return cls(G, b)


def relation_pairs(G: GroupAction) -> list[tuple[int, int, int, int]]:
    """Each commutation relation as arrow indices (p, q, s, t): path p.q must equal s.t.

    For vertex k and flavors alpha < beta: p = (k, alpha), q = (k + w_alpha, beta),
    s = (k, beta), t = (k + w_beta, alpha).
    """
    r = G.order
    w = G.weights
    out = []
    for k in range(r):
        for a, b in ((1, 2), (1, 3), (2, 3)):
            out.append(
                (
                    arrow_index(k, a),
                    arrow_index((k + w[a - 1]) % r, b),
                    arrow_index(k, b),
                    arrow_index((k + w[b - 1]) % r, a),
                )
            )
    return out


def relation_residual(B: Constellation) -> float:
    flat = B.b.reshape(-1)
    worst = 0.0
    for p, q, s, t in relation_pairs(B.group):
        worst = max(worst, abs(flat[q] * flat[p] - flat[t] * flat[s]))
    return float(worst)


def _out_masks(G: GroupAction, support: np.ndarray) -> list[int]:
    r = G.order
    outs = []
    for k in range(r):
        m = 0
        for alpha in (1, 2, 3):
            if support[k, alpha - 1]:
                m |= 1 << ((k + G.weights[alpha - 1]) % r)
        outs.append(m)
    return outs


def _invariant_flags(G: GroupAction, support: np.ndarray) -> np.ndarray:
    """Boolean vector over all 2^r subset masks: is the subset closed under arrows."""
    r = G.order
    if r > MAX_SUBSET_ORDER:
        raise ValueError(f"subset scan over 2^{r} subsets is beyond desk scale (r <= {MAX_SUBSET_ORDER})")
    masks = _subset_masks(r)
    ok = np.ones(masks.shape, dtype=bool)
    for k, out in enumerate(_out_masks(G, support)):
        if out:
            ok &= ((masks >> k) & 1 == 0) | ((masks & out) == out)
    return ok


def invariant_subsets(B: Constellation, tol: Optional[float] = DEFAULT_SUPPORT_TOL) -> list[frozenset[int]]:
    """All vertex subsets closed under the nonzero arrows of B (including empty and full)."""
    flags = _invariant_flags(B.group, B.support(tol))
    return [_mask_to_set(int(m)) for m in np.flatnonzero(flags)]


def _stability(B: Constellation, theta: StabilityParam, tol, strict: bool) -> Verdict:
    r = B.group.order
    if theta.order != r:
        raise InvalidTheta(f"theta has {theta.order} entries for a group of order {r}")
    flags = _invariant_flags(B.group, B.support(tol))
    vals = _subset_values(theta)
    full = (1 << r) - 1
    for mask in np.flatnonzero(flags):
        mask = int(mask)
        if mask == 0 or mask == full:
            continue
        v = vals[mask]
        if (v <= 0) if strict else (v < 0):
            return Verdict(False, _mask_to_set(mask))
    return Verdict(True)


def is_theta_stable(B: Constellation, theta: StabilityParam, tol: Optional[float] = DEFAULT_SUPPORT_TOL) -> Verdict:
    """theta(S) > 0 for every proper nonempty B-invariant S; witness is a violator."""
    return _stability(B, theta, tol, strict=True)


def is_theta_semistable(
    B: Constellation, theta: StabilityParam, tol: Optional[float] = DEFAULT_SUPPORT_TOL
) -> Verdict:
    return _stability(B, theta, tol, strict=False)


# ---------------------------------------------------------------------------
# Test-data generation


def orbit_constellation(G: GroupAction, x: Sequence[complex]) -> Constellation:
    """The representation with b_alpha(k) = x_alpha at every vertex."""
    b = np.tile(np.asarray(x, dtype=complex), (G.order, 1))
    return Constellation(G, b)


def satisfies_path_exchange(G: GroupAction, support: np.ndarray) -> bool:
    flat = np.asarray(support, dtype=bool).reshape(-1)
    return all((flat[p] and flat[q]) == (flat[s] and flat[t]) for p, q, s, t in relation_pairs(G))


def _repair_pattern(G: GroupAction, zeroed: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Zero further arrows until every relation has both sides zero or both nonzero."""
    flat = zeroed.reshape(-1).copy()
    changed = True
    while changed:
        changed = False
        for p, q, s, t in relation_pairs(G):
            left = not flat[p] and not flat[q]
            right = not flat[s] and not flat[t]
            if left != right:
                pair = (p, q) if left else (s, t)
                flat[pair[int(rng.integers(2))]] = True
                changed = True
    return flat.reshape(zeroed.shape)


def random_constellation(
    G: GroupAction,
    seed: int,
    zero_pattern: Optional[Iterable[tuple[int, int]]] = None,
    zero_prob: float = 0.0,
    max_tries: int = 100,
) -> Constellation:
    """Seeded orbit representation with some arrows switched off.

    ``zero_pattern`` zeroes exactly the listed arrows ``(k, alpha)`` and raises
    PatternInfeasible if that breaks a relation. ``zero_prob`` zeroes each
    arrow independently; such random patterns are completed to
    relation-preserving ones by zeroing further arrows, and redrawn (up to
    ``max_tries``) if the completion would leave no arrow at all.
    """
    rng = np.random.default_rng(seed)
    x = rng.normal(size=3) + 1j * rng.normal(size=3)
    base = np.tile(x, (G.order, 1))
    fixed = np.zeros((G.order, 3), dtype=bool)
    for k, alpha in zero_pattern or ():
        fixed[k % G.order, alpha - 1] = True
    if zero_prob <= 0:
        if not satisfies_path_exchange(G, ~fixed):
            raise PatternInfeasible(f"zero pattern breaks a commutation relation of {G.label}")
        zeroed = fixed
    else:
        for _ in range(max_tries):
            zeroed = _repair_pattern(G, fixed | (rng.random((G.order, 3)) < zero_prob), rng)
            if not zeroed.all():
                break
        else:
            raise PatternInfeasible(
                f"no nonzero relation-preserving pattern for {G.label} after {max_tries} attempts"
            )
    b = base.copy()
    b[zeroed] = 0
    return Constellation(G, b)


# ---------------------------------------------------------------------------
# Torus-fixed points


@dataclass(frozen=True)
class FixedPoint:
    group: GroupAction
    support: tuple[tuple[int, int], ...]
    stable_for: StabilityParam

    def to_json(self) -> list[list[int]]:
        return [[k, a] for k, a in self.support]

    def constellation(self) -> Constellation:
        return Constellation.from_arrows(self.group, {arrow: 1.0 for arrow in self.support})


def _path_exchange_supports(G: GroupAction) -> list[int]:
    """All arrow bitmasks satisfying path exchange, by backtracking."""
    n = 3 * G.order
    rels = relation_pairs(G)
    # Check each relation as soon as its last arrow is decided.
    due: list[list[tuple[int, int, int, int]]] = [[] for _ in range(n)]
    for rel in rels:
        due[max(rel)].append(rel)
    out = []

    def rec(i: int, mask: int) -> None:
        if i == n:
            out.append(mask)
            return
        for bit in (0, 1):
            m = mask | (bit << i)
            ok = True
            for p, q, s, t in due[i]:
                left = (m >> p & 1) and (m >> q & 1)
                right = (m >> s & 1) and (m >> t & 1)
                if left != right:
                    ok = False
                    break
            if ok:
                rec(i + 1, m)

    rec(0, 0)
    return out


def _deformation_dimension(G: GroupAction, mask: int) -> int:
    """Dimension of {v on support: v_p + v_q = v_s + v_t for fully supported relations}."""
    arrows = [i for i in range(3 * G.order) if mask >> i & 1]
    col = {a: j for j, a in enumerate(arrows)}
    rows = []
    for p, q, s, t in relation_pairs(G):
        if all(mask >> a & 1 for a in (p, q, s, t)):
            row = [0] * len(arrows)
            row[col[p]] += 1
            row[col[q]] += 1
            row[col[s]] -= 1
            row[col[t]] -= 1
            if any(row):
                rows.append(row)
    return len(arrows) - (exact_rank(rows) if rows else 0)


def _support_array(G: GroupAction, mask: int) -> np.ndarray:
    return np.array([[bool(mask >> arrow_index(k, a) & 1) for a in (1, 2, 3)] for k in range(G.order)])


@lru_cache(maxsize=None)
def _rigid_candidates(G: GroupAction) -> tuple[tuple[int, ...], np.ndarray]:
    """theta-independent part of the fixed-point search.

    Returns the rigid path-exchange supports and, for each, the boolean vector
    of its invariant subsets.
    """
    if G.order > MAX_SUPPORT_ORDER:
        raise ValueError(f"support enumeration over 2^{3 * G.order} is beyond desk scale (r <= {MAX_SUPPORT_ORDER})")
    masks = []
    flags = []
    for mask in _path_exchange_supports(G):
        if _deformation_dimension(G, mask) != G.order - 1:
            continue
        masks.append(mask)
        flags.append(_invariant_flags(G, _support_array(G, mask)))
    table = np.array(flags, dtype=bool) if flags else np.zeros((0, 1 << G.order), dtype=bool)
    return tuple(masks), table


def enumerate_fixed_points(G: GroupAction, theta: StabilityParam) -> list[FixedPoint]:
    """Arrow supports of the torus-fixed theta-stable constellations.

    A support qualifies when it has the path-exchange property, the all-ones
    representation on it is theta-stable, and its only first-order
    deformations are gauge directions (solution space of dimension r - 1).
    """
    if theta.order != G.order:
        raise InvalidTheta(f"theta has {theta.order} entries for a group of order {G.order}")
    gen = is_generic(theta)
    if not gen:
        raise NotGeneric(f"theta = ({theta}) is not generic: theta({sorted(gen.witness)}) = 0", gen.witness)
    masks, table = _rigid_candidates(G)
    if not masks:
        return []
    r = G.order
    vals = np.array([float(v) for v in _subset_values(theta)])
    proper = np.ones(1 << r, dtype=bool)
    proper[0] = proper[-1] = False
    # Generic theta never vanishes on a proper subset, so float signs are exact.
    bad = table & proper & (vals < 0)
    stable = ~bad.any(axis=1)
    out = []
    for mask, is_stable in zip(masks, stable):
        if is_stable:
            support = tuple(arrow_of(i) for i in range(3 * r) if mask >> i & 1)
            out.append(FixedPoint(G, support, theta))
    return out


def fixed_point_fingerprint(points: Sequence[FixedPoint]) -> tuple:
    """Order-independent label of a fixed-point set, for grouping chambers."""
    return tuple(sorted(p.support for p in points))
