"""McKay-quiver multiplicities and the Cartan-type matrices C~, C and C^-1."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import IndexOutOfRange
from .group import GroupAction, format_fraction
from .linalg import bareiss_inverse

__all__ = [
    "MckayMatrix",
    "exterior_weights",
    "multiplicity",
    "alternating_entry",
    "closed_form_entry",
    "cartan_matrices",
]


def exterior_weights(G: GroupAction, i: int) -> list[int]:
    """Characters (as residues mod r) occurring in the i-th exterior power of C^3."""
    r = G.order
    w1, w2, w3 = G.weights
    if i == 0 or i == 3:
        return [0]
    if i == 1:
        return [w1 % r, w2 % r, w3 % r]
    if i == 2:
        return [(w1 + w2) % r, (w1 + w3) % r, (w2 + w3) % r]
    raise IndexOutOfRange(f"exterior power index {i} not in 0..3")


def multiplicity(G: GroupAction, i: int, rho: int, sigma: int) -> int:
    """Multiplicity of sigma in Lambda^i C^3 (x) rho."""
    r = G.order
    return sum(1 for u in exterior_weights(G, i) if (rho + u - sigma) % r == 0)


def alternating_entry(G: GroupAction, rho: int, sigma: int) -> int:
    return sum((-1) ** i * multiplicity(G, i, rho, sigma) for i in range(4))


def closed_form_entry(G: GroupAction, rho: int, sigma: int) -> int:
    r = G.order
    minus = sum(1 for w in G.weights if (rho - w - sigma) % r == 0)
    plus = sum(1 for w in G.weights if (rho + w - sigma) % r == 0)
    return minus - plus


@dataclass(frozen=True)
class MckayMatrix:
    group: GroupAction
    full: tuple[tuple[int, ...], ...]
    reduced: tuple[tuple[int, ...], ...]
    inverse: tuple[tuple[Fraction, ...], ...]
    determinant: int

    @property
    def labels(self) -> list[int]:
        return list(self.group.irreps)

    @property
    def reduced_labels(self) -> list[int]:
        return list(self.group.nontrivial_irreps)

    def to_json(self) -> dict:
        return {
            "group": self.group.label,
            "labels": self.labels,
            "reduced_labels": self.reduced_labels,
            "full": [list(row) for row in self.full],
            "reduced": [list(row) for row in self.reduced],
            "inverse": [[format_fraction(x) for x in row] for row in self.inverse],
            "determinant": self.determinant,
        }


@lru_cache(maxsize=None)
def cartan_matrices(G: GroupAction) -> MckayMatrix:
    """Assemble C~ (indexed 0..r-1), C (drop index 0) and the exact inverse of C.

    Raises SingularMatrix if C is not invertible, which never happens for a
    valid group and would indicate a bug.
    """
    r = G.order
    counts = Counter()
    for w in G.weights:
        for rho in range(r):
            counts[rho, (rho - w) % r] += 1
            counts[rho, (rho + w) % r] -= 1
    full = tuple(tuple(counts[rho, sigma] for sigma in range(r)) for rho in range(r))
    reduced = tuple(row[1:] for row in full[1:])
    det, inv = bareiss_inverse(reduced)
    assert det.denominator == 1
    return MckayMatrix(
        group=G,
        full=full,
        reduced=reduced,
        inverse=tuple(tuple(row) for row in inv),
        determinant=int(det),
    )
