"""Neimark-Sacker bifurcation of the interior fixed point E1.

Pipeline, with ``beta`` the bifurcation parameter:

1. locate ``beta0`` where the determinant ``q(u1)`` of the Jacobian at E1
   equals 1 (:func:`find_ns_beta`);
2. eigenvalues and transversality of the perturbed linearisation;
3. third-order Taylor coefficients of the map shifted to E1;
4. change of basis ``T = [[m n, -n], [0, 1]]`` and the transformed
   coefficients ``c_ij``, ``d_ij``;
5. the complex coefficients ``L20, L11, L02, L21`` and the discriminant ``L``.
   ``L < 0`` means an attracting closed curve appears for ``beta > beta0``.

Conventions: ``lambda1`` has negative imaginary part, ``lambda2`` is its
conjugate. The transformed nonlinearity can be built two ways. ``literal``
(the default) keeps the published coefficient lists, whose ``XY`` terms
carry ``a20 m n^2`` and ``b20 m n^2`` rather than ``2 a20 m n^2`` and
``2 b20 m n^2``; the reference values of ``L`` are computed that way.
``composed`` uses the exact expansion of ``T^-1 H(T X)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from . import model
from .errors import (ConsistencyError, DomainError, NotFoundError, RealEigenvalueError,
                     SingularTransformError)
from .fixed_points import u_hat
from .model import Params
from .roots import bisect

NS_SCAN_POINTS = 2000
NS_EDGE = 1e-4
RESONANCE_TOL = 1e-6
XY_CONVENTIONS = ("literal", "composed")


class NSPoint(NamedTuple):
    beta0: float
    u1: float


def q_on_branch(r: float, theta: float, gamma: float, u: float) -> float:
    """Determinant at the fixed point ``u`` with beta taken as ``psi(u)``."""
    p0 = Params(r, 1.0, theta, gamma)
    return model.q_of_u(p0.with_beta(model.psi(p0, u)), u)


def find_ns_all(r: float, theta: float, gamma: float,
                n: int = NS_SCAN_POINTS) -> list[NSPoint]:
    """Every solution of ``q(u) = 1`` on the E1 branch, sorted by ``beta0``."""
    p0 = Params(r, 1.0, theta, gamma)
    top = min(u_hat(p0), 1.0)
    lo, hi = NS_EDGE, top - NS_EDGE
    if hi <= lo:
        return []
    f = lambda u: q_on_branch(r, theta, gamma, u) - 1.0  # noqa: E731
    us = np.linspace(lo, hi, n)
    fs = [f(float(u)) for u in us]
    sols = []
    for i in range(n - 1):
        if fs[i] == 0.0:
            u = float(us[i])
        elif (fs[i] > 0.0) != (fs[i + 1] > 0.0) and fs[i + 1] != 0.0:
            a, b = bisect(f, float(us[i]), float(us[i + 1]), xtol=1e-15, fa=fs[i], fb=fs[i + 1])
            u = 0.5 * (a + b)
        else:
            continue
        sols.append(NSPoint(model.psi(p0, u), u))
    return sorted(sols)


def find_ns_beta(r: float, theta: float, gamma: float) -> NSPoint:
    """The Neimark-Sacker point on E1 with the smallest ``beta0``."""
    sols = find_ns_all(r, theta, gamma)
    if not sols:
        raise NotFoundError(
            f"q(u) - 1 has no sign change on the E1 branch for r={r}, theta={theta}, gamma={gamma}"
        )
    return sols[0]


def _nu_omega(p: Params, u1: float, beta_star: float) -> tuple[float, float]:
    g = p.gamma
    G = g * g + u1 * u1
    nu = model.p_of_u(p, u1) + beta_star * u1 * u1 / G
    om = 1.0 + 2.0 * beta_star * u1 * u1 * (1.0 - u1) / G
    return nu, om


def eigen_at(p: Params, u1: float, beta_star: float = 0.0) -> tuple[complex, complex]:
    """Eigenvalues of the linearisation at ``beta0 + beta_star`` (``p.beta`` is ``beta0``)."""
    nu, om = _nu_omega(p, u1, beta_star)
    disc = 4.0 * om - nu * nu
    if disc <= 0.0:
        raise RealEigenvalueError(f"4 omega - nu^2 = {disc!r} <= 0: eigenvalues are real")
    s = math.sqrt(disc)
    return complex(nu / 2.0, -s / 2.0), complex(nu / 2.0, s / 2.0)


def transversality(p: Params, u1: float) -> float:
    """``d|lambda|/d beta*`` at ``beta* = 0``."""
    if not 0.0 < u1 < 1.0:
        raise DomainError(f"u1 must lie in (0, 1), got {u1!r}")
    g = p.gamma
    return u1 * u1 * (1.0 - u1) / (g * g + u1 * u1)


@dataclass(frozen=True)
class TaylorA:
    """Coefficients of ``x'``; ``a02 = a03 = a12 = 0``."""

    a10: float
    a01: float
    a20: float
    a11: float
    a30: float
    a21: float


@dataclass(frozen=True)
class TaylorB:
    """Coefficients of ``y'``; ``b02 = b03 = b12 = 0``."""

    b10: float
    b01: float
    b20: float
    b11: float
    b30: float
    b21: float


def _check_critical(p: Params, u1: float, tol: float = 1e-8) -> None:
    model.check_fixed(p, u1, tol)
    q = model.q_of_u(p, u1)
    if abs(q - 1.0) > tol:
        raise ConsistencyError(f"q(u1) = {q!r} is not 1 to within {tol}")


def taylor_coeffs(p: Params, u1: float, check: bool = True) -> tuple[TaylorA, TaylorB]:
    """Third-order Taylor coefficients of the map shifted to E1 at ``beta = p.beta``.

    The formulas hold at any positive fixed point. ``check`` enforces the
    bifurcation condition ``q(u1) = 1`` as well.
    """
    if check:
        _check_critical(p, u1)
    else:
        model.check_fixed(p, u1)
    u, g, b0, th = u1, p.gamma, p.beta, p.theta
    g2, u2 = g * g, u * u
    G = g2 + u2
    D = g + u
    a = TaylorA(
        a10=2.0 * u2 * (1.0 - u) / G,
        a01=-u2 / G,
        a20=(g2 * u2 * (3.0 - 5.0 * u) - u ** 5 - g2 * g2) / (u * G ** 2),
        a11=-2.0 * g2 * u / G ** 2,
        a30=4.0 * g2 * (1.0 - u) * (g2 - u2) / G ** 3,
        a21=g2 * (3.0 * u2 - g2) / G ** 3,
    )
    bracket = 2.0 * b0 * g * u / G ** 2 - th / D ** 2
    b = TaylorB(
        b10=g * (1.0 - u) * G / u * bracket,
        b01=1.0,
        b20=g * (1.0 - u) / u * (b0 * g * (g2 - 3.0 * u2) / G ** 2 + th * G / D ** 3),
        b11=g * bracket,
        b30=g * (1.0 - u) * G / u * (4.0 * b0 * g * u * (u2 - g2) / G ** 4 - th / D ** 4),
        b21=g * (b0 * g * (g2 - 3.0 * u2) / G ** 3 + th / D ** 3),
    )
    return a, b


def transform_mn(p: Params, u1: float) -> tuple[float, float]:
    """Entries ``m, n`` of ``T = [[m n, -n], [0, 1]]``."""
    g2, u2 = p.gamma ** 2, u1 * u1
    denom = g2 - u2 + 2.0 * u2 * u1
    if denom == 0.0:
        raise SingularTransformError("gamma^2 - u1^2 + 2 u1^3 = 0: T is singular")
    return (g2 + u2) / denom, u2 / (2.0 * (g2 + u2))


def transform_matrix(m: float, n: float) -> tuple[np.ndarray, np.ndarray]:
    """``T`` and its closed-form inverse."""
    T = np.array([[m * n, -n], [0.0, 1.0]])
    Tinv = np.array([[1.0 / (m * n), 1.0 / m], [0.0, 1.0]])
    return T, Tinv


def transformed_coeffs(a: TaylorA, b: TaylorB, m: float, n: float,
                       xy: str = "literal") -> tuple[dict, dict]:
    """Coefficients ``c_ij`` of ``F`` and ``d_ij`` of ``G``, where ``(F, G) = T^-1 H(T X)``."""
    if xy not in XY_CONVENTIONS:
        raise ValueError(f"xy must be one of {XY_CONVENTIONS}, got {xy!r}")
    k = 1.0 if xy == "literal" else 2.0
    a20, a11, a30, a21 = a.a20, a.a11, a.a30, a.a21
    b20, b11, b30, b21 = b.b20, b.b11, b.b30, b.b21
    c = {
        "c20": a20 * m * n + b20 * m * n ** 2,
        "c11": a11 - k * a20 * n + b11 * n - k * b20 * n ** 2,
        "c02": (a20 * n - a11 + b20 * n ** 2 - b11 * n) / m,
        "c30": a30 * m ** 2 * n ** 2 + b30 * m ** 2 * n ** 3,
        "c21": a21 * m * n - 3.0 * a30 * m * n ** 2 + b21 * m * n ** 2 - 3.0 * b30 * m * n ** 3,
        "c12": 3.0 * a30 * n ** 2 - 2.0 * a21 * n + 3.0 * b30 * n ** 3 - 2.0 * b21 * n ** 2,
        "c03": (a21 * n - a30 * n ** 2 + b21 * n ** 2 - b30 * n ** 3) / m,
    }
    d = {
        "d20": b20 * m ** 2 * n ** 2,
        "d11": b11 * m * n - k * b20 * m * n ** 2,
        "d02": b20 * n ** 2 - b11 * n,
        "d30": b30 * m ** 3 * n ** 3,
        "d21": b21 * m ** 2 * n ** 2 - 3.0 * b30 * m ** 2 * n ** 3,
        "d12": 3.0 * b30 * m * n ** 3 - 2.0 * b21 * m * n ** 2,
        "d03": b21 * n ** 2 - b30 * n ** 3,
    }
    return c, d


def partials(c: dict, d: dict) -> tuple[dict, dict]:
    """Second and third partial derivatives of ``F`` and ``G`` at the origin."""
    F = {
        "XX": 2.0 * c["c20"], "XY": c["c11"], "YY": 2.0 * c["c02"],
        "XXX": 6.0 * c["c30"], "XXY": 2.0 * c["c21"], "XYY": 2.0 * c["c12"], "YYY": 6.0 * c["c03"],
    }
    G = {
        "XX": 2.0 * d["d20"], "XY": d["d11"], "YY": 2.0 * d["d02"],
        "XXX": 6.0 * d["d30"], "XXY": 2.0 * d["d21"], "XYY": 2.0 * d["d12"], "YYY": 6.0 * d["d03"],
    }
    return F, G


def l_coefficients(F: dict, G: dict) -> tuple[complex, complex, complex, complex]:
    L20 = complex(F["XX"] - F["YY"] + 2.0 * G["XY"], G["XX"] - G["YY"] - 2.0 * F["XY"]) / 8.0
    L11 = complex(F["XX"] + F["YY"], G["XX"] + G["YY"]) / 4.0
    L02 = complex(F["XX"] - F["YY"] - 2.0 * G["XY"], G["XX"] - G["YY"] + 2.0 * F["XY"]) / 8.0
    L21 = complex(F["XXX"] + F["XYY"] + G["XXY"] + G["YYY"],
                  G["XXX"] + G["XYY"] - F["XXY"] - F["YYY"]) / 16.0
    return L20, L11, L02, L21


def discriminant(lam1: complex, lam2: complex, L20: complex, L11: complex, L02: complex,
                 L21: complex) -> float:
    first = ((1.0 - 2.0 * lam1) * lam2 ** 2 / (1.0 - lam1) * L11 * L20).real
    return -first - 0.5 * abs(L11) ** 2 - abs(L02) ** 2 + (lam2 * L21).real


def direction_of(L: float) -> str:
    if L < 0.0:
        return "attracting_curve_for_beta_above"
    if L > 0.0:
        return "repelling_curve_for_beta_below"
    return "degenerate"


@dataclass(frozen=True)
class NormalFormReport:
    beta0: float
    u1: float
    v1: float
    lambda1: complex
    lambda2: complex
    alpha: float
    transversality: float
    non_resonant: bool
    taylor_a: dict
    taylor_b: dict
    m: float
    n: float
    c: dict
    d: dict
    L20: complex
    L11: complex
    L02: complex
    L21: complex
    L: float
    direction: str
    xy_convention: str = "literal"
    ns_solutions: list = field(default_factory=list)

    def to_dict(self) -> dict:
        """Plain JSON-ready mapping; complex numbers become ``{"re", "im"}``."""
        def conv(x):
            if isinstance(x, complex):
                return {"im": x.imag, "re": x.real}
            if isinstance(x, dict):
                return {k: conv(v) for k, v in x.items()}
            if isinstance(x, (list, tuple)):
                return [conv(v) for v in x]
            return x
        raw = asdict(self)
        raw["ns_solutions"] = [{"beta0": s[0], "u1": s[1]} for s in self.ns_solutions]
        return {k: conv(v) for k, v in raw.items()}


def normal_form_L(p: Params, u1: float, xy: str = "literal") -> NormalFormReport:
    """Full coefficient cascade at the bifurcation point ``(p.beta, u1)``."""
    a, b = taylor_coeffs(p, u1)
    p_trace = 1.0 + a.a10
    if not 1.0 < p_trace < 2.0:
        raise RealEigenvalueError(f"p(u1) = {p_trace!r} outside (1, 2): alpha is not real")
    alpha = math.sqrt(3.0 - a.a10 ** 2 - 2.0 * a.a10)
    lam1 = complex((1.0 + a.a10) / 2.0, -alpha / 2.0)
    lam2 = lam1.conjugate()
    m, n = transform_mn(p, u1)
    c, d = transformed_coeffs(a, b, m, n, xy)
    F, G = partials(c, d)
    L20, L11, L02, L21 = l_coefficients(F, G)
    L = discriminant(lam1, lam2, L20, L11, L02, L21)
    non_res = all(abs(lam1 ** k - 1.0) > RESONANCE_TOL for k in range(1, 5))
    return NormalFormReport(
        beta0=p.beta, u1=u1, v1=model.v_of_u(p, u1),
        lambda1=lam1, lambda2=lam2, alpha=alpha,
        transversality=transversality(p, u1), non_resonant=non_res,
        taylor_a=asdict(a), taylor_b=asdict(b), m=m, n=n, c=c, d=d,
        L20=L20, L11=L11, L02=L02, L21=L21, L=L, direction=direction_of(L),
        xy_convention=xy,
    )


def analyze(r: float, theta: float, gamma: float, xy: str = "literal") -> NormalFormReport:
    """Locate the bifurcation on E1 and compute its normal-form report."""
    sols = find_ns_all(r, theta, gamma)
    if not sols:
        raise NotFoundError(
            f"no Neimark-Sacker point on E1 for r={r}, theta={theta}, gamma={gamma}"
        )
    beta0, u1 = sols[0]
    rep = normal_form_L(Params(r, beta0, theta, gamma), u1, xy)
    return NormalFormReport(**{**rep.__dict__, "ns_solutions": [tuple(s) for s in sols]})


def shifted_map(p: Params, u1: float, v1: float, x: float, y: float) -> tuple[float, float]:
    """The map in coordinates centred on ``(u1, v1)``."""
    s = model.step(p, model.State(x + u1, y + v1, escaped=True))
    return s.u - u1, s.v - v1


__all__ = [
    "NSPoint", "NormalFormReport", "TaylorA", "TaylorB", "analyze", "discriminant",
    "direction_of", "eigen_at", "find_ns_all", "find_ns_beta", "l_coefficients",
    "normal_form_L", "partials", "q_on_branch", "shifted_map", "taylor_coeffs",
    "transform_matrix", "transform_mn", "transformed_coeffs", "transversality",
]
