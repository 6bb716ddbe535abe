"""Existence, location and classification of fixed points.

Positive fixed points have abscissae solving ``psi(u) = beta`` on ``(0, 1)``.
``psi`` is strictly decreasing on ``(0, min(u_hat, 1))`` and, when
``u_hat < 1``, strictly increasing on ``(u_hat, 1)``. Each monotone piece
holds at most one root, which is bracketed and bisected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import model, stability
from .model import Params, State
from .roots import bisect_newton, cauchy_bound
from .stability import Kind

SQRT2_MINUS_1 = math.sqrt(2.0) - 1.0
SQRT7_MINUS_2 = math.sqrt(7.0) - 2.0
TANGENCY_TOL = 1e-10
ROOT_XTOL = 1e-13


@dataclass(frozen=True)
class RegionLabel:
    """Region of ``(r, gamma, theta)`` space that fixes the fixed-point count.

    ``theta_low`` is ``4 r gamma (1 + gamma) / (3 - 4 gamma - gamma^2)`` and
    ``theta_high`` is ``2 r gamma (1 + gamma)^2 / (1 - 2 gamma - gamma^2)``.
    Each is recorded only when the decision actually compared against it.
    """

    tag: str
    gamma_low: float = SQRT2_MINUS_1
    gamma_high: float = SQRT7_MINUS_2
    theta_low: Optional[float] = None
    theta_high: Optional[float] = None


@dataclass(frozen=True)
class FixedPointRecord:
    u: float
    v: float
    branch: str  # origin | boundary | E1 | E2
    kind: Kind
    tangent: bool = False
    residual: float = 0.0

    @property
    def state(self) -> State:
        return State(self.u, self.v)


def theta_low(r: float, gamma: float) -> Optional[float]:
    denom = 3.0 - 4.0 * gamma - gamma * gamma
    return 4.0 * r * gamma * (1.0 + gamma) / denom if denom > 0.0 else None


def theta_high(r: float, gamma: float) -> Optional[float]:
    denom = 1.0 - 2.0 * gamma - gamma * gamma
    return 2.0 * r * gamma * (1.0 + gamma) ** 2 / denom if denom > 0.0 else None


def classify_region(p: Params) -> RegionLabel:
    """Which of R1 to R5 contains ``(r, gamma, theta)``.

    ``theta == theta_high`` with ``gamma < sqrt(2) - 1`` lies between R3 and
    R5 as the regions are written. It is assigned to R3 because there
    ``h(1) = 0`` and psi is still monotone on ``(0, 1)``.
    """
    r, g, th = p.r, p.gamma, p.theta
    if g >= SQRT7_MINUS_2:
        return RegionLabel("R2")
    t1 = theta_low(r, g)
    if g >= SQRT2_MINUS_1:
        return RegionLabel("R1" if th <= t1 else "R4", theta_low=t1)
    if th <= t1:
        return RegionLabel("R1", theta_low=t1)
    t2 = theta_high(r, g)
    if th <= t2:
        return RegionLabel("R3", theta_low=t1, theta_high=t2)
    return RegionLabel("R5", theta_low=t1, theta_high=t2)


def u_hat(p: Params) -> float:
    """The unique positive root of ``h``."""
    coeffs = model.h_coefficients(p)
    hi = cauchy_bound(coeffs)
    f = lambda u: model.h_poly(p, u)  # noqa: E731
    fp = lambda u: model.h_prime(p, u)  # noqa: E731
    return bisect_newton(f, fp, 0.0, hi, xtol=ROOT_XTOL)


def psi_one(p: Params) -> float:
    return model.psi(p, 1.0)


def _solve_psi(p: Params, lo: float, hi: float, decreasing: bool) -> float:
    """Root of ``psi(u) = beta`` on a monotone piece ``(lo, hi)``."""
    beta = p.beta
    f = lambda u: model.psi(p, u) - beta  # noqa: E731
    fprime = lambda u: model.psi_prime(p, u)  # noqa: E731
    if decreasing and lo == 0.0:
        # psi has a pole at 0: walk the left end down until psi exceeds beta.
        lo = 0.5 * hi
        while f(lo) <= 0.0:
            lo *= 0.5
            if lo < 1e-300:
                raise ArithmeticError("could not bracket the E1 root near u = 0")
    u = bisect_newton(f, fprime, lo, hi, xtol=ROOT_XTOL)
    return u


def _record(p: Params, u: float, branch: str, tangent: bool = False) -> FixedPointRecord:
    v = model.v_of_u(p, u)
    img = model.step(p, State(u, v))
    resid = max(abs(img.u - u), abs(img.v - v))
    fp = FixedPointRecord(u, v, branch, Kind.NONHYPERBOLIC, tangent, resid)
    if not tangent:
        kind = stability.classify_E(p, fp)
        fp = FixedPointRecord(u, v, branch, kind, tangent, resid)
    return fp


def positive_fixed_points(p: Params) -> list[FixedPointRecord]:
    """Positive fixed points sorted by ``u``, labelled E1 (and E2).

    When ``beta`` equals ``psi(u_hat)`` to within :data:`TANGENCY_TOL` the
    double root is returned as a single E1 record with ``tangent=True``.
    """
    uh = u_hat(p)
    top = min(uh, 1.0)
    psi_top = model.psi(p, top)
    beta = p.beta
    out: list[FixedPointRecord] = []
    if uh < 1.0 and abs(beta - psi_top) < TANGENCY_TOL:
        return [_record(p, uh, "E1", tangent=True)]
    if beta > psi_top:
        out.append(_record(p, _solve_psi(p, 0.0, top, decreasing=True), "E1"))
    if uh < 1.0:
        psi1 = model.psi(p, 1.0)
        if psi_top < beta < psi1:
            out.append(_record(p, _solve_psi(p, uh, 1.0, decreasing=False), "E2"))
    return out


def predicted_count(p: Params) -> int:
    """Number of positive fixed points according to the existence theorem."""
    region = classify_region(p).tag
    psi1 = model.psi(p, 1.0)
    if region != "R5":
        return 1 if p.beta > psi1 else 0
    psi_min = model.psi(p, u_hat(p))
    if p.beta > psi1 or abs(p.beta - psi_min) < TANGENCY_TOL:
        return 1
    if psi_min < p.beta < psi1:
        return 2
    if p.beta == psi1:
        return 1
    return 0


def origin_kind(p: Params, tau: float = stability.TAU) -> Kind:
    # eigenvalues 2 and 1 - r
    if abs(p.r - 2.0) <= tau:
        return Kind.NONHYPERBOLIC
    return Kind.SADDLE if p.r < 2.0 else Kind.REPELLING


def boundary_eigenvalue(p: Params) -> float:
    """Non-zero eigenvalue at ``(1, 0)``; the other one is 0."""
    g = p.gamma
    return 1.0 - p.r + p.beta / (1.0 + g * g) - p.theta / (1.0 + g)


def boundary_kind(p: Params, tau: float = stability.TAU) -> Kind:
    lam = boundary_eigenvalue(p)
    if abs(abs(lam) - 1.0) <= tau:
        return Kind.NONHYPERBOLIC
    return Kind.ATTRACTING if abs(lam) < 1.0 else Kind.SADDLE


def boundary_classification(p: Params) -> tuple[Kind, Kind]:
    """Types of ``(0, 0)`` and ``(1, 0)``."""
    return origin_kind(p), boundary_kind(p)


def all_fixed_points(p: Params) -> list[FixedPointRecord]:
    """Origin, boundary point and every positive fixed point."""
    k0, k1 = boundary_classification(p)
    return [
        FixedPointRecord(0.0, 0.0, "origin", k0),
        FixedPointRecord(1.0, 0.0, "boundary", k1),
        *positive_fixed_points(p),
    ]
