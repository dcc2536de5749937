"""Eta invariants of the Dirac operator at infinity, by the fixed-point character sum."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .errors import NonRationalResult, ZeroDenominator
from .group import CyclotomicNumber, GroupAction, character, format_fraction

__all__ = [
    "EtaTable",
    "det_one_minus",
    "eta_invariant",
    "eta_table",
    "eta_float",
]


def det_one_minus(G: GroupAction, j: int) -> CyclotomicNumber:
    """det(I - g^j) = prod_i (1 - zeta^(j*w_i)) as an exact cyclotomic number."""
    r = G.order
    one = CyclotomicNumber.from_rational(r, 1)
    out = one
    for w in G.weights:
        out = out * (one - CyclotomicNumber.zeta_power(r, j * w))
    return out


@lru_cache(maxsize=None)
def _inverse_dets(G: GroupAction) -> tuple[CyclotomicNumber, ...]:
    """1/det(I - g^j) for j = 1..r-1.

    Only j = 1 is inverted; the others are its images under zeta -> zeta^j.
    """
    den = det_one_minus(G, 1)
    if not den:
        raise ZeroDenominator(f"det(I - g) vanishes for {G.label}")
    inv = den.inverse()
    return tuple(inv.galois(j) for j in range(1, G.order))


def eta_invariant(G: GroupAction, chi: Callable[[int], CyclotomicNumber]) -> Fraction:
    """-(2/r) * sum_{j=1}^{r-1} chi(g^j) / det(I - g^j), certified rational."""
    r = G.order
    total = CyclotomicNumber.from_rational(r, 0)
    inverse_dets = _inverse_dets(G)
    for j in range(1, r):
        total = total + chi(j) * inverse_dets[j - 1]
    total = total * Fraction(-2, r)
    value = total.rational_value()
    if value is None:
        raise NonRationalResult(f"eta sum for {G.label} is not rational: {total!r}")
    return value


def eta_float(G: GroupAction, d: int) -> float:
    """Floating-point evaluation of the same character sum, for cross-checks."""
    r = G.order
    acc = 0j
    for j in range(1, r):
        z = cmath.exp(2j * math.pi * j / r)
        den = 1 + 0j
        for w in G.weights:
            den *= 1 - z**w
        acc += z**d / den
    return (-2 / r * acc).real


@dataclass(frozen=True)
class EtaTable:
    group: GroupAction
    by_difference: dict[int, Fraction]

    def pair(self, rho: int, sigma: int) -> Fraction:
        """eta of R_rho (x) R_sigma^*; depends only on rho - sigma."""
        return self.by_difference[(rho - sigma) % self.group.order]

    @property
    def pair_view(self) -> list[list[Fraction]]:
        r = self.group.order
        return [[self.pair(rho, sigma) for sigma in range(r)] for rho in range(r)]

    def to_json(self) -> dict:
        return {
            "group": self.group.label,
            "eta": {str(d): format_fraction(v) for d, v in sorted(self.by_difference.items())},
        }


@lru_cache(maxsize=None)
def eta_table(G: GroupAction) -> EtaTable:
    r = G.order
    values = {d: _eta_for_difference(G, d) for d in range(r)}
    return EtaTable(G, values)


def _eta_for_difference(G: GroupAction, d: int) -> Fraction:
    # Same sum as eta_invariant with chi = zeta^(d*j), multiplying by shifts.
    r = G.order
    total = CyclotomicNumber.from_rational(r, 0)
    for j, inv in enumerate(_inverse_dets(G), start=1):
        total = total + inv.mul_zeta(d * j)
    total = total * Fraction(-2, r)
    value = total.rational_value()
    if value is None:
        raise NonRationalResult(f"eta sum for {G.label}, d={d} is not rational: {total!r}")
    return value
