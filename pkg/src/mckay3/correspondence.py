"""Exact check of the eta/Cartan identity chain and the predicted intersection matrix.

The geometric input (vanishing of the Dirac index on every R_rho (x) R_sigma^*)
is taken as given; everything checked here is finite rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .eta import eta_table
from .group import GroupAction, format_fraction
from .linalg import identity, matmul, transpose
from .mckay import cartan_matrices

__all__ = [
    "Check",
    "VerificationReport",
    "IntersectionPrediction",
    "verify_index_identity",
    "verify_chain",
    "predicted_intersection_matrix",
]


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


@dataclass
class Check:
    name: str
    statement: str
    passed: bool
    lhs: Any = None
    rhs: Any = None
    witness: Any = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "pass": self.passed,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "witness": _jsonable(self.witness),
        }


@dataclass
class VerificationReport:
    group: GroupAction
    checks: list[Check] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "group": self.group.label,
            "overall": self.overall,
            "checks": [c.to_json() for c in self.checks],
        }


def _delta(a: int, b: int) -> int:
    return 1 if a == b else 0


def verify_index_identity(G: GroupAction) -> Check:
    """sum_rho c[tau][rho] * eta(rho - sigma) == -2 (delta(tau, sigma) - 1/r) for all tau, sigma."""
    r = G.order
    c = cartan_matrices(G).full
    eta = eta_table(G)
    worst = None
    checked = 0
    for tau in range(r):
        for sigma in range(r):
            lhs = sum((c[tau][rho] * eta.pair(rho, sigma) for rho in range(r)), Fraction(0))
            rhs = -2 * (_delta(tau, sigma) - Fraction(1, r))
            checked += 1
            if lhs != rhs and worst is None:
                worst = {"tau": tau, "sigma": sigma, "lhs": lhs, "rhs": rhs}
    if worst is None:
        sample_lhs = sum((c[1][rho] * eta.pair(rho, 0) for rho in range(r)), Fraction(0))
        return Check(
            "index_identity",
            "sum_rho c[tau,rho] eta[rho-sigma] = -2(delta[tau,sigma] - 1/r) for all tau, sigma",
            True,
            lhs=sample_lhs,
            rhs=-2 * (0 - Fraction(1, r)),
            witness={"pairs_checked": checked, "sample": {"tau": 1, "sigma": 0}},
        )
    return Check(
        "index_identity",
        "sum_rho c[tau,rho] eta[rho-sigma] = -2(delta[tau,sigma] - 1/r) for all tau, sigma",
        False,
        lhs=worst["lhs"],
        rhs=worst["rhs"],
        witness={"tau": worst["tau"], "sigma": worst["sigma"]},
    )


def _structure_checks(G: GroupAction) -> list[Check]:
    mm = cartan_matrices(G)
    r = G.order
    full = mm.full
    bad_row = next((rho for rho in range(r) if sum(full[rho]) != 0), None)
    bad_skew = next(
        ((a, b) for a in range(r) for b in range(r) if full[a][b] != -full[b][a]),
        None,
    )
    return [
        Check(
            "row_sums",
            "sum_sigma c[rho,sigma] = 0 for every rho",
            bad_row is None,
            lhs=[sum(row) for row in full],
            rhs=0,
            witness=None if bad_row is None else {"rho": bad_row},
        ),
        Check(
            "skew_symmetry",
            "C~ = -C~^T",
            bad_skew is None,
            witness=None if bad_skew is None else {"rho": bad_skew[0], "sigma": bad_skew[1]},
        ),
        Check(
            "invertible",
            "det C is a nonzero integer",
            mm.determinant != 0,
            lhs=mm.determinant,
            rhs="nonzero",
        ),
    ]


def chain_matrix(G: GroupAction) -> list[list[Fraction]]:
    """m[tau][sigma] = (1/2) sum_rho c[tau,rho] (eta[rho - sigma] - eta[rho]), all tau, sigma."""
    r = G.order
    c = cartan_matrices(G).full
    eta = eta_table(G)
    return [
        [
            Fraction(1, 2)
            * sum((c[tau][rho] * (eta.pair(rho, sigma) - eta.pair(rho, 0)) for rho in range(r)), Fraction(0))
            for sigma in range(r)
        ]
        for tau in range(r)
    ]


def verify_chain(G: GroupAction) -> VerificationReport:
    r = G.order
    mm = cartan_matrices(G)
    c = mm.full
    eta = eta_table(G)
    report = VerificationReport(G)
    report.checks.extend(_structure_checks(G))
    report.checks.append(verify_index_identity(G))

    # (a) the constant-in-rho term drops out by the row-sum identity.
    third = [
        [sum((c[tau][rho] * eta.by_difference[(-sigma) % r] for rho in range(r)), Fraction(0)) for sigma in range(r)]
        for tau in range(r)
    ]
    bad = next(((t, s) for t in range(r) for s in range(r) if third[t][s] != 0), None)
    report.checks.append(
        Check(
            "third_term_vanishes",
            "sum_rho c[tau,rho] eta[-sigma] = 0 for all tau, sigma",
            bad is None,
            lhs=third[bad[0]][bad[1]] if bad else Fraction(0),
            rhs=Fraction(0),
            witness=None if bad is None else {"tau": bad[0], "sigma": bad[1]},
        )
    )

    # (b) closed form of the right-hand side; the second delta enters with a
    # plus sign (it is minus one half of the identity at sigma = 0).
    m = chain_matrix(G)
    expected = [
        [-(_delta(t, s) - Fraction(1, r)) + (_delta(t, 0) - Fraction(1, r)) for s in range(r)]
        for t in range(r)
    ]
    bad = next(((t, s) for t in range(r) for s in range(r) if m[t][s] != expected[t][s]), None)
    report.checks.append(
        Check(
            "chain_closed_form",
            "m[tau,sigma] = -(delta[tau,sigma] - 1/r) + (delta[tau,0] - 1/r)",
            bad is None,
            lhs=m[bad[0]][bad[1]] if bad else m[0][0],
            rhs=expected[bad[0]][bad[1]] if bad else expected[0][0],
            witness=None if bad is None else {"tau": bad[0], "sigma": bad[1]},
        )
    )

    # (c) nontrivial block: C M = -I, with M solved from the chain and the
    # trivial row dropped because ch~(R_0) = 0.
    rhs_block = [row[1:] for row in m[1:]]
    solved = matmul(mm.inverse, rhs_block)
    product = matmul(mm.reduced, solved)
    minus_id = [[-x for x in row] for row in identity(r - 1)]
    report.checks.append(
        Check(
            "cartan_times_pairing",
            "C M = -I on nontrivial irreps",
            product == minus_id,
            lhs=product,
            rhs=minus_id,
        )
    )
    neg_inv = [[-x for x in row] for row in mm.inverse]
    report.checks.append(
        Check(
            "pairing_equals_minus_inverse",
            "M = -C^-1 entrywise",
            solved == neg_inv,
            lhs=solved,
            rhs=neg_inv,
        )
    )
    return report


@dataclass(frozen=True)
class IntersectionPrediction:
    """Predicted values of int ch~(R_rho) ch~(R_sigma^*) for nontrivial rho, sigma.

    For line bundles the degree-6 part of ch~(R_rho) ch~(R_sigma^*) is
    (a b^2 - a^2 b)/2 with a = c1(R_rho), b = c1(R_sigma), so the same matrix
    fixes the triple-pairing slice int a.b.(a - b) = -2 M.
    """

    group: GroupAction
    matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def labels(self) -> list[int]:
        return list(self.group.nontrivial_irreps)

    @property
    def triple_pairing(self) -> list[list[Fraction]]:
        return [[-2 * x for x in row] for row in self.matrix]

    def to_json(self) -> dict:
        return {
            "group": self.group.label,
            "labels": self.labels,
            "matrix": [[format_fraction(x) for x in row] for row in self.matrix],
            "triple_pairing": {
                "statement": "int c1(R_rho) c1(R_sigma) (c1(R_rho) - c1(R_sigma)) = -2 M[rho,sigma]",
                "matrix": [[format_fraction(x) for x in row] for row in self.triple_pairing],
            },
        }


def predicted_intersection_matrix(G: GroupAction) -> IntersectionPrediction:
    mm = cartan_matrices(G)
    M = tuple(tuple(-x for x in row) for row in mm.inverse)
    assert [list(row) for row in M] == [[-x for x in row] for row in transpose(M)]
    return IntersectionPrediction(G, M)
