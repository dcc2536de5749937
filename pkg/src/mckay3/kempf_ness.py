"""Moment map for the diagonal gauge torus and a Kempf-Ness solver for mu(B) = zeta_theta.

The gauge group acting on dimension vector (1,...,1) is the diagonal torus;
modulo the centre its positive real part is parametrised by log-coordinates
x with sum(x) = 0. Minimising the convex functional

    f(x) = 1/4 sum_arrows |b|^2 exp(2 (x_head - x_tail)) - sum_k theta_k x_k

along the orbit finds the point where mu = theta; it is unbounded below
exactly when some B-invariant vertex subset S has theta(S) < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import MaxIterExceeded
from .quiver import (
    DEFAULT_SUPPORT_TOL,
    Constellation,
    StabilityParam,
    _invariant_flags,
    _set_to_mask,
)

__all__ = [
    "SolverConfig",
    "Solved",
    "Unstable",
    "moment_map",
    "zeta_of_theta",
    "gauge_act",
    "phase_act",
    "kn_functional",
    "kn_gradient",
    "kn_hessian",
    "kempf_ness_solve",
    "as_matrices",
    "moment_pairing",
    "kahler_form",
    "infinitesimal_action",
    "project",
]


def project(x) -> np.ndarray:
    """Orthogonal projection onto the sum-zero hyperplane."""
    x = np.asarray(x, dtype=float)
    return x - x.mean()


def _heads(B: Constellation) -> np.ndarray:
    r = B.group.order
    return (np.arange(r)[:, None] + np.array(B.group.weights)[None, :]) % r


def moment_map(B: Constellation) -> np.ndarray:
    """mu_k = 1/2 (incoming minus outgoing |b|^2) at each vertex."""
    r = B.group.order
    energy = np.abs(B.b) ** 2
    mu = -energy.sum(axis=1)
    np.add.at(mu, _heads(B).reshape(-1), energy.reshape(-1))
    return 0.5 * mu


def zeta_of_theta(theta: StabilityParam) -> np.ndarray:
    # Pairing against the basis i*pi_rho of the centre reads off theta itself.
    return theta.as_float()


def gauge_act(x, B: Constellation) -> Constellation:
    """Positive diagonal gauge exp(x): b_alpha(k) -> exp(x_head - x_k) b_alpha(k)."""
    x = np.asarray(x, dtype=float)
    scale = np.exp(x[_heads(B)] - x[:, None])
    return Constellation(B.group, B.b * scale)


def phase_act(phases, B: Constellation) -> Constellation:
    """Unitary diagonal gauge with the given vertex phases."""
    u = np.exp(1j * np.asarray(phases, dtype=float))
    return Constellation(B.group, B.b * u[_heads(B)] / u[:, None])


def kn_functional(B: Constellation, theta: StabilityParam, x) -> float:
    x = np.asarray(x, dtype=float)
    energy = np.abs(B.b) ** 2
    delta = x[_heads(B)] - x[:, None]
    return float(0.25 * np.sum(energy * np.exp(2 * delta)) - np.dot(zeta_of_theta(theta), x))


def kn_gradient(B: Constellation, theta: StabilityParam, x) -> np.ndarray:
    return project(moment_map(gauge_act(x, B)) - zeta_of_theta(theta))


def kn_hessian(B: Constellation, x) -> np.ndarray:
    """Weighted graph Laplacian of the gauged arrow energies."""
    r = B.group.order
    energy = np.abs(gauge_act(x, B).b) ** 2
    heads = _heads(B)
    H = np.zeros((r, r))
    for k in range(r):
        for a in range(3):
            e = energy[k, a]
            if e == 0:
                continue
            h = heads[k, a]
            H[h, h] += e
            H[k, k] += e
            H[h, k] -= e
            H[k, h] -= e
    return H


# ---------------------------------------------------------------------------
# Matrix picture, used for the symplectic checks.


def as_matrices(B: Constellation) -> np.ndarray:
    """B as three r x r endomorphisms of the regular representation (shape (3, r, r))."""
    r = B.group.order
    mats = np.zeros((3, r, r), dtype=complex)
    heads = _heads(B)
    for k in range(r):
        for a in range(3):
            mats[a, heads[k, a], k] = B.b[k, a]
    return mats


def moment_pairing(mats: np.ndarray, xi: np.ndarray) -> float:
    """<mu(B), xi> = sum_alpha 1/(2i) tr(xi [B_alpha, B_alpha^*])."""
    total = 0j
    for Ba in mats:
        comm = Ba @ Ba.conj().T - Ba.conj().T @ Ba
        total += np.trace(xi @ comm) / 2j
    return float(total.real)


def kahler_form(Bm: np.ndarray, Cm: np.ndarray) -> float:
    """omega(B, C) = Im sum_alpha tr(B_alpha C_alpha^*)."""
    return float(sum(np.trace(Ba @ Ca.conj().T) for Ba, Ca in zip(Bm, Cm)).imag)


def infinitesimal_action(xi: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """Vector field X_xi(B) = [xi, B]."""
    return np.array([xi @ Ba - Ba @ xi for Ba in mats])


# ---------------------------------------------------------------------------
# Solver


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    max_iter: int = 500
    divergence_bound: float = 50.0
    backtrack: float = 0.5
    max_step: float = 5.0
    armijo: float = 1e-4
    support_tol: Optional[float] = DEFAULT_SUPPORT_TOL


@dataclass
class Solved:
    x: np.ndarray
    residual: float
    iterations: int
    history: list[float] = field(default_factory=list)

    status = "solved"

    def to_json(self, include_history: bool = False) -> dict:
        out = {
            "status": self.status,
            "x": [float(v) for v in self.x],
            "residual": float(self.residual),
            "iterations": self.iterations,
        }
        if include_history:
            out["residual_history"] = [float(v) for v in self.history]
        return out


@dataclass
class Unstable:
    certificate: frozenset[int]
    theta_value: Fraction
    x: np.ndarray
    iterations: int
    history: list[float] = field(default_factory=list)

    status = "unstable"

    def to_json(self, include_history: bool = False) -> dict:
        out = {
            "status": self.status,
            "certificate": sorted(self.certificate),
            "theta_of_certificate": f"{self.theta_value.numerator}/{self.theta_value.denominator}",
            "x": [float(v) for v in self.x],
            "residual": float(self.history[-1]) if self.history else None,
            "iterations": self.iterations,
        }
        if include_history:
            out["residual_history"] = [float(v) for v in self.history]
        return out


def _certificate(B: Constellation, theta: StabilityParam, x: np.ndarray, support_tol) -> Optional[frozenset[int]]:
    """Low side of the largest gap in x, if it is a genuine destabilising subset.

    Falls back to the other gaps, largest first.
    """
    order = np.argsort(x, kind="stable")
    gaps = np.diff(x[order])
    flags = _invariant_flags(B.group, B.support(support_tol))
    for cut in np.argsort(-gaps, kind="stable"):
        S = frozenset(int(k) for k in order[: cut + 1])
        if flags[_set_to_mask(S)] and theta(S) <= 0:
            return S
    return None


def kempf_ness_solve(
    B: Constellation,
    theta: StabilityParam,
    tol: float = 1e-10,
    max_iter: int = 500,
    config: Optional[SolverConfig] = None,
    x0=None,
) -> Union[Solved, Unstable]:
    """Damped Newton on the Kempf-Ness functional over the sum-zero hyperplane.

    Returns Solved when ||mu(exp(x).B) - theta||_inf <= tol, Unstable with a
    verified destabilising subset once ||x||_inf passes the divergence bound,
    and raises MaxIterExceeded otherwise.
    """
    cfg = config or SolverConfig(tol=tol, max_iter=max_iter)
    r = B.group.order
    x = project(np.zeros(r) if x0 is None else x0)
    ones = np.ones((r, r)) / r
    history: list[float] = []
    fx = kn_functional(B, theta, x)
    for it in range(cfg.max_iter + 1):
        g = kn_gradient(B, theta, x)
        res = float(np.max(np.abs(g)))
        history.append(res)
        if res <= cfg.tol:
            return Solved(x, res, it, history)
        if np.max(np.abs(x)) > cfg.divergence_bound:
            S = _certificate(B, theta, x, cfg.support_tol)
            if S is not None:
                return Unstable(S, theta(S), x, it, history)
        if it == cfg.max_iter:
            break
        H = kn_hessian(B, x)
        reg = 1e-12 * max(1.0, np.trace(H)) + 1e-10 * res
        d = -np.linalg.solve(H + ones + reg * np.eye(r), g)
        d = project(d)
        norm = np.max(np.abs(d))
        if norm > cfg.max_step:
            d *= cfg.max_step / norm
        slope = float(np.dot(g, d))
        t = 1.0
        while True:
            x_new = x + t * d
            f_new = kn_functional(B, theta, x_new)
            if f_new <= fx + cfg.armijo * t * slope:
                break
            # Near the minimum f is flat to roundoff; fall back on the gradient norm.
            if np.max(np.abs(kn_gradient(B, theta, x_new))) < res:
                break
            t *= cfg.backtrack
            if t < 1e-16:
                break
        x, fx = project(x_new), f_new
    raise MaxIterExceeded(
        f"Kempf-Ness solve did not converge in {cfg.max_iter} iterations (residual {history[-1]:.3e})",
        residual=history[-1],
        x=x,
    )
