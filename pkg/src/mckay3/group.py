"""Cyclic groups 1/r(w1,w2,w3) in SL(3,C) and exact arithmetic in Q(zeta_r)."""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DeterminantNotOne, DivisionByZero, InvalidGroup, NotFree, NotPrime

__all__ = [
    "GroupAction",
    "CyclotomicNumber",
    "new_group",
    "parse_group",
    "character",
    "cyc_add",
    "cyc_mul",
    "cyc_inv",
    "is_rational",
    "is_prime",
    "valid_groups",
    "format_fraction",
    "parse_fraction",
]

_GROUP_RE = re.compile(r"^\s*1\s*/\s*(\d+)\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


def format_fraction(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s.strip().replace("−", "-"))


@dataclass(frozen=True)
class GroupAction:
    """The diagonal action of Z/r on C^3 with weights (w1, w2, w3).

    Irreducible representations are labelled by residues 0..r-1, with 0 the
    trivial one; the generator acts on C^3 by diag(zeta^w1, zeta^w2, zeta^w3).
    """

    order: int
    weights: tuple[int, int, int]

    @property
    def r(self) -> int:
        return self.order

    @property
    def irreps(self) -> range:
        return range(self.order)

    @property
    def nontrivial_irreps(self) -> range:
        return range(1, self.order)

    @property
    def label(self) -> str:
        w1, w2, w3 = self.weights
        return f"1/{self.order}({w1},{w2},{w3})"

    def __str__(self) -> str:
        return self.label

    def equivalent_presentations(self) -> list[tuple[int, int, int]]:
        """Weight triples defining the same subgroup of SL(3,C) up to relabelling.

        Covers coordinate permutations and rescaling by units of Z/r (a change
        of generator). Reported only; the group itself is never canonicalized.
        """
        r = self.order
        out = set()
        for u in range(1, r):
            scaled = [(u * w) % r for w in self.weights]
            for a, b, c in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
                out.add((scaled[a], scaled[b], scaled[c]))
        return sorted(out)


def new_group(r: int, w1: int, w2: int, w3: int) -> GroupAction:
    """Validate and build the group 1/r(w1,w2,w3)."""
    r = int(r)
    if not is_prime(r):
        raise NotPrime(
            f"group order {r} is not prime; a cyclic subgroup of SL(3,C) acting "
            "freely on C^3 minus the origin must have prime order"
        )
    weights = tuple(int(w) % r for w in (w1, w2, w3))
    if sum(weights) % r != 0:
        raise DeterminantNotOne(
            f"weights {weights} sum to {sum(weights)}, not 0 mod {r}; the action is not in SL(3,C)"
        )
    for i, w in enumerate(weights, start=1):
        if w == 0:
            raise NotFree(f"weight w{i} is 0 mod {r}; the action fixes a coordinate axis")
    return GroupAction(r, weights)  # type: ignore[arg-type]


def parse_group(text: str) -> GroupAction:
    """Parse a literal such as ``"1/7(1,2,4)"``."""
    m = _GROUP_RE.match(text)
    if not m:
        raise InvalidGroup(f"cannot parse group literal {text!r}; expected e.g. '1/7(1,2,4)'")
    r, w1, w2, w3 = (int(g) for g in m.groups())
    return new_group(r, w1, w2, w3)


def valid_groups(max_order: int) -> list[GroupAction]:
    """Every valid weight triple (residues in 1..r-1) for prime r <= max_order."""
    out = []
    for r in range(2, max_order + 1):
        if not is_prime(r):
            continue
        for w1 in range(1, r):
            for w2 in range(1, r):
                w3 = (-w1 - w2) % r
                if w3:
                    out.append(GroupAction(r, (w1, w2, w3)))
    return out


# ---------------------------------------------------------------------------
# Q(zeta_r) for prime r, stored in the basis 1, zeta, ..., zeta^(r-2).


def _reduce(order: int, full: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Reduce a coefficient vector modulo x^r - 1 and then modulo Phi_r."""
    buf: list = [0] * order
    for i, c in enumerate(full):
        if c:
            buf[i % order] += c
    top = buf[order - 1]
    if top:
        return tuple(Fraction(c - top) for c in buf[: order - 1])
    return tuple(Fraction(c) for c in buf[: order - 1])


@dataclass(frozen=True, eq=False)
class CyclotomicNumber:
    order: int
    coeffs: tuple[Fraction, ...]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.rational_value() == other
        if isinstance(other, CyclotomicNumber):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        q = self.rational_value()
        return hash(q) if q is not None else hash((self.order, self.coeffs))

    def __post_init__(self):
        if len(self.coeffs) != self.order - 1:
            raise ValueError(f"expected {self.order - 1} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_rational(cls, order: int, q) -> "CyclotomicNumber":
        coeffs = [Fraction(0)] * (order - 1)
        coeffs[0] = Fraction(q)
        return cls(order, tuple(coeffs))

    @classmethod
    def zeta_power(cls, order: int, k: int) -> "CyclotomicNumber":
        full = [Fraction(0)] * order
        full[k % order] = Fraction(1)
        return cls(order, _reduce(order, full))

    @classmethod
    def from_coeffs(cls, order: int, coeffs: Iterable) -> "CyclotomicNumber":
        """Build from coefficients of any length, reducing modulo Phi_r."""
        return cls(order, _reduce(order, [Fraction(c) for c in coeffs]))

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise ValueError(f"mixing Q(zeta_{self.order}) and Q(zeta_{other.order})")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_rational(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicNumber(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = self.order
        full = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    full[(i + j) % n] += a * b
        return CyclotomicNumber(n, _reduce(n, full))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.from_rational(self.order, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_zeta(self, k: int) -> "CyclotomicNumber":
        """Multiply by zeta^k (a cyclic shift before reduction)."""
        n = self.order
        full = [0] * n
        for i, c in enumerate(self.coeffs):
            full[(i + k) % n] = c
        return CyclotomicNumber(n, _reduce(n, full))

    def galois(self, j: int) -> "CyclotomicNumber":
        """Image under the field automorphism zeta -> zeta^j (j coprime to r)."""
        n = self.order
        if j % n == 0:
            raise ValueError("zeta -> 1 is not an automorphism")
        full = [0] * n
        for i, c in enumerate(self.coeffs):
            full[(i * j) % n] = c
        return CyclotomicNumber(n, _reduce(n, full))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not self

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse via the extended Euclidean algorithm against Phi_r."""
        if not self:
            raise DivisionByZero("cannot invert 0 in Q(zeta)")
        n = self.order
        phi = [Fraction(1)] * n
        a = _trim(list(self.coeffs))
        # Invariant: s * self == rem (mod phi).
        r0, r1 = phi, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r1 is a nonzero constant because Phi_r is irreducible.
        c = r1[0]
        return CyclotomicNumber.from_coeffs(n, [x / c for x in s1])

    def rational_value(self) -> Optional[Fraction]:
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.order)
        return sum((complex(c) * z**i for i, c in enumerate(self.coeffs)), 0j)

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(format_fraction(c) if i == 0 else f"{format_fraction(c)}*z^{i}")
        return f"CyclotomicNumber[{self.order}]({' + '.join(terms) or '0'})"


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    if len(num) - 1 < dd:
        return [Fraction(0)], _trim(num)
    quot = [Fraction(0)] * (len(num) - dd)
    for i in range(len(num) - 1 - dd, -1, -1):
        c = num[i + dd] / lead
        quot[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    rem = _trim(num[:dd] if dd else [Fraction(0)])
    return _trim(quot), rem


def character(G: GroupAction, k: int, j: int) -> CyclotomicNumber:
    """Value of the irreducible character chi_k at g^j, i.e. zeta^(k*j)."""
    return CyclotomicNumber.zeta_power(G.order, (k * j) % G.order)


def cyc_add(a: CyclotomicNumber, b: CyclotomicNumber) -> CyclotomicNumber:
    return a + b


def cyc_mul(a: CyclotomicNumber, b: CyclotomicNumber) -> CyclotomicNumber:
    return a * b


def cyc_inv(a: CyclotomicNumber) -> CyclotomicNumber:
    return a.inverse()


def is_rational(a: CyclotomicNumber) -> Optional[Fraction]:
    return a.rational_value()
