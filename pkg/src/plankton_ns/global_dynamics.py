"""Analytic conditions for global behaviour of the map.

Three questions are answered here without iterating the map:

* whether the zooplankton update stays nonnegative on ``[0, 1] x [0, inf)``,
  through a literal table of the 24 parameter cases with their two cubics;
* where the boundary curve ``omega`` of the trapping region ``M`` turns;
* which global-convergence statement applies to a parameter set, and from
  which initial region.

The module is called ``global_dynamics`` because ``global`` is a keyword.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import fixed_points, model
from .errors import RootCountError
from .model import Params
from .roots import poly_real_roots, polyval

SQRT2 = math.sqrt(2.0)
SILVER = 3.0 - 2.0 * SQRT2  # 3 - 2 sqrt(2)
THETA_TIER_IV = 3.0 + 2.0 * SQRT2
GAMMA_OMEGA = 2.0 / (3.0 * math.sqrt(3.0))
CUBIC_SCAN = 10_000
CUBIC_XTOL = 1e-13


# ---------------------------------------------------------------------------
# K polynomial and the two cubics


@dataclass(frozen=True)
class KPoly:
    """``K(u) = a3 u^3 + a2 u^2 + a1 u + a0``; its sign is the sign of ``v'`` for ``v > 0``."""

    a3: float
    a2: float
    a1: float
    a0: float

    @classmethod
    def from_params(cls, p: Params) -> "KPoly":
        d = 1.0 - p.r
        g = p.gamma
        return cls(p.beta + d - p.theta, (p.beta + d) * g, (d - p.theta) * g * g, d * g ** 3)

    @property
    def coefficients(self) -> tuple[float, float, float, float]:
        return (self.a3, self.a2, self.a1, self.a0)

    def __call__(self, u: float) -> float:
        return polyval(self.coefficients, u)

    def critical_points(self) -> list[float]:
        """Real zeros of ``K'``, ascending."""
        a, b, c = 3.0 * self.a3, 2.0 * self.a2, self.a1
        if a == 0.0:
            return [] if b == 0.0 else [-c / b]
        disc = b * b - 4.0 * a * c
        if disc < 0.0:
            return []
        s = math.sqrt(disc)
        # avoid cancellation: one root from the stable form, the other from Vieta
        qq = -0.5 * (b + math.copysign(s, b))
        roots = [qq / a, c / qq] if qq != 0.0 else [0.0, 0.0]
        return sorted(roots)


def gamma_cubic(p: Params) -> list[float]:
    """Coefficients in ``gamma`` (leading first) of ``K(1) = 0``."""
    d = 1.0 - p.r
    return [d, d - p.theta, p.beta + d, p.beta + d - p.theta]


def beta_cubic(p: Params) -> list[float]:
    """Coefficients in ``beta`` (leading first) of the condition ``K(u_2) = 0``."""
    r, th = p.r, p.theta
    return [
        4 * r - 4,
        th ** 2 - 20 * th + 20 * r * th + 40 * r - 20 * r ** 2 - 20,
        (4 * th ** 3 + 8 * th ** 2 - 8 * r * th ** 2 + 8 * th - 16 * r * th + 8 * r ** 2 * th
         + 32 * r ** 3 - 96 * r ** 2 + 96 * r - 32),
        (-4 * th ** 4 + 16 * th ** 3 - 16 * r * th ** 3 - 32 * th ** 2 + 64 * r * th ** 2
         - 32 * r ** 2 * th ** 2 + 32 * th - 96 * r * th + 96 * r ** 2 * th - 32 * r ** 3 * th
         - 16 * r ** 4 + 64 * r ** 3 - 96 * r ** 2 + 64 * r - 16),
    ]


def cubic_discriminant(c: list[float]) -> float:
    a, b, cc, d = c
    return 18 * a * b * cc * d - 4 * b ** 3 * d + b * b * cc * cc - 4 * a * cc ** 3 - 27 * a * a * d * d


def positive_roots(coeffs: list[float]) -> list[float]:
    return poly_real_roots(coeffs, n=CUBIC_SCAN, xtol=CUBIC_XTOL, positive_only=True)


def kpoly_min(p: Params) -> tuple[float, float]:
    """Minimiser and minimum of ``K`` on ``[0, 1]``.

    Candidates are the endpoints and every real critical point inside the
    interval. With ``beta + 1 - r - theta = 0`` the polynomial is quadratic
    and its single critical point is used instead.
    """
    k = KPoly.from_params(p)
    cands = [0.0, 1.0] + [u for u in k.critical_points() if 0.0 < u < 1.0]
    best = min(cands, key=lambda u: (k(u), u))
    return best, k(best)


# ---------------------------------------------------------------------------
# nonnegativity case table


@dataclass(frozen=True)
class NonnegVerdict:
    holds: bool
    case_label: Optional[str]
    gamma_roots: Optional[tuple[float, float]] = None
    beta_roots: Optional[tuple[float, float]] = None
    flags: tuple[str, ...] = ()


@dataclass
class _Ctx:
    p: Params
    A: float  # (4 - theta) / 4
    S: float  # 1 - theta (3 - 2 sqrt 2)
    c: float  # r + theta - 1
    _g: Optional[list[float]] = None
    _b: Optional[list[float]] = None
    flags: list[str] = field(default_factory=list)

    def gamma_roots(self) -> list[float]:
        if self._g is None:
            self._g = positive_roots(gamma_cubic(self.p))
            if len(self._g) >= 3:
                self.flags.append("three_gamma_roots")
        return self._g

    def beta_roots(self) -> list[float]:
        if self._b is None:
            self._b = positive_roots(beta_cubic(self.p))
            if len(self._b) >= 3:
                self.flags.append("three_beta_roots")
        return self._b

    def root(self, name: str) -> float:
        if name in ("g1", "g3"):
            rts, coeffs = self.gamma_roots(), gamma_cubic(self.p)
        else:
            rts, coeffs = self.beta_roots(), beta_cubic(self.p)
        need = 1 if name in ("g1", "b2") else 2
        if len(rts) < need:
            raise RootCountError(
                f"{name}: expected at least {need} positive root(s), found {len(rts)}",
                discriminant=cubic_discriminant(coeffs), roots=tuple(rts))
        pick = rts[0] if need == 1 else rts[-1]
        return pick


# A row is (label, r-condition, beta-condition, gamma-condition). The
# r-condition uses only closed-form thresholds; when it holds, every root
# named by the remaining two conditions must exist.
Cond = Callable[[_Ctx], bool]


def _r(lo: Callable[[_Ctx], float], hi: Callable[[_Ctx], float], lo_open=True, hi_closed=True) -> Cond:
    def f(x: _Ctx) -> bool:
        r = x.p.r
        ok_lo = r > lo(x) if lo_open else r >= lo(x)
        ok_hi = r <= hi(x) if hi_closed else r < hi(x)
        return ok_lo and ok_hi
    return f


_zero = lambda x: 0.0  # noqa: E731
_one = lambda x: 1.0  # noqa: E731
_A = lambda x: x.A  # noqa: E731
_S = lambda x: x.S  # noqa: E731
_1mth = lambda x: 1.0 - x.p.theta  # noqa: E731

_any = lambda x: True  # noqa: E731
_b_lt_c = lambda x: 0.0 < x.p.beta < x.c  # noqa: E731
_b_ge_c = lambda x: x.p.beta >= x.c  # noqa: E731
_b_lt_b2 = lambda x: 0.0 < x.p.beta < x.root("b2")  # noqa: E731
_b_b2_b3 = lambda x: x.root("b2") <= x.p.beta < x.root("b3")  # noqa: E731
_b_b3_c = lambda x: x.root("b3") <= x.p.beta < x.c  # noqa: E731
_b_ge_b3 = lambda x: x.p.beta >= x.root("b3")  # noqa: E731
_g_gt_g1 = lambda x: x.p.gamma > x.root("g1")  # noqa: E731
_g_ge_g1 = lambda x: x.p.gamma >= x.root("g1")  # noqa: E731
_g_ge_g3 = lambda x: x.p.gamma >= x.root("g3")  # noqa: E731

_TIERS: list[tuple[Callable[[float], bool], list[tuple[str, Cond, Cond, Cond]]]] = [
    (lambda th: th <= 1.0, [
        ("i.1", _r(_zero, _1mth), _any, _any),
        ("i.2", _r(_1mth, _A), _b_lt_c, _g_gt_g1),
        ("i.3", _r(_1mth, _S), _b_ge_c, _any),
        ("i.4", _r(_A, _one, hi_closed=False), _b_lt_b2, _g_ge_g1),
        ("i.5", _r(_A, _S), _b_b2_b3, _g_ge_g3),
        ("i.6", _r(_A, _S, hi_closed=False), _b_b3_c, _g_ge_g1),
        ("i.7", _r(_S, _one, hi_closed=False), _b_b2_b3, _g_ge_g3),
        ("i.8", _r(_S, _one, hi_closed=False), _b_ge_b3, _any),
    ]),
    (lambda th: 1.0 < th <= 4.0, [
        ("ii.1", _r(_zero, _A), _b_lt_c, _g_ge_g1),
        ("ii.2", _r(_zero, _S), _b_ge_c, _any),
        ("ii.3", _r(_A, _one, hi_closed=False), _b_lt_b2, _g_ge_g1),
        ("ii.4", _r(_A, _S), _b_b2_b3, _g_ge_g3),
        ("ii.5", _r(_A, _S, hi_closed=False), _b_b3_c, _g_ge_g1),
        ("ii.6", _r(_S, _one, hi_closed=False), _b_b2_b3, _g_ge_g3),
        ("ii.7", _r(_S, _one, hi_closed=False), _b_ge_b3, _any),
    ]),
    (lambda th: 4.0 < th < THETA_TIER_IV, [
        ("iii.1", _r(_zero, _one, hi_closed=False), _b_lt_b2, _g_ge_g1),
        ("iii.2", _r(_zero, _S), _b_b2_b3, _g_ge_g3),
        ("iii.3", _r(_zero, _S, hi_closed=False), _b_b3_c, _g_ge_g1),
        ("iii.4", _r(_zero, _S), _b_ge_c, _any),
        ("iii.5", _r(_S, _one, hi_closed=False), _b_b2_b3, _g_ge_g3),
        ("iii.6", _r(_S, _one, hi_closed=False), _b_ge_b3, _any),
    ]),
    (lambda th: th >= THETA_TIER_IV, [
        ("iv.1", _r(_zero, _one, hi_closed=False), _b_lt_b2, _g_ge_g1),
        ("iv.2", _r(_zero, _one, hi_closed=False), _b_b2_b3, _g_ge_g3),
        ("iv.3", _r(_zero, _one, hi_closed=False), _b_ge_b3, _any),
    ]),
]

CASE_LABELS = tuple(label for _, rows in _TIERS for label, *_ in rows)


def nonneg_case(p: Params) -> NonnegVerdict:
    """First case of the nonnegativity table satisfied by ``p``, if any.

    Cubic roots are computed only when a row whose ``r``-range holds refers
    to them. :class:`RootCountError` means such a row needed a root that the
    cubic does not have.
    """
    th = p.theta
    ctx = _Ctx(p, A=(4.0 - th) / 4.0, S=1.0 - th * SILVER, c=p.r + th - 1.0)
    rows = next(rows for test, rows in _TIERS if test(th))
    label = None
    for name, r_ok, b_ok, g_ok in rows:
        if r_ok(ctx) and b_ok(ctx) and g_ok(ctx):
            label = name
            break
    g = ctx._g
    b = ctx._b
    groots = (g[0], g[-1]) if g else None
    broots = (b[0], b[-1]) if b else None
    return NonnegVerdict(label is not None, label, groots, broots, tuple(ctx.flags))


# ---------------------------------------------------------------------------
# omega geometry


def rho(gamma: float, u: float) -> float:
    return -u ** 3 + u * u - gamma * gamma


def rho_max(gamma: float) -> float:
    """Maximum of ``rho`` on ``[0, 1]``, attained at ``u = 2/3``."""
    return (4.0 - 27.0 * gamma * gamma) / 27.0


def omega_critical(p: Params) -> Optional[tuple[float, float]]:
    """The two zeros of ``rho`` in ``(0, 1)``, or ``None`` if ``rho_max <= 0``.

    ``omega`` decreases on ``(0, x1)``, increases on ``(x1, x2)`` and
    decreases again on ``(x2, 1)``.
    """
    g = p.gamma
    if rho_max(g) <= 0.0:
        return None
    roots = poly_real_roots([-1.0, 1.0, 0.0, -g * g], n=CUBIC_SCAN, xtol=CUBIC_XTOL)
    inside = sorted(u for u in roots if 0.0 < u < 1.0)
    if len(inside) != 2:
        raise RootCountError(f"rho should have two zeros in (0, 1), found {inside}",
                             discriminant=rho_max(g), roots=tuple(inside))
    return inside[0], inside[1]


# ---------------------------------------------------------------------------
# convergence hypotheses


@dataclass(frozen=True)
class Region:
    """Initial-condition region from which convergence to ``(1, 0)`` is claimed.

    ``kind`` is ``full_M``, ``u_below`` (``0 < u <= bound``) or ``v_below``
    (``v < bound`` with ``bound = omega(x1)``).
    """

    kind: str
    bound: Optional[float] = None


@dataclass(frozen=True)
class Hypotheses:
    applies: Optional[str]  # "5.2", "5.3(i)", "5.3(ii)", "5.4" or None
    regions: tuple[Region, ...]
    verdict: NonnegVerdict
    reason: str
    x_bar: Optional[tuple[float, float]] = None


def no_positive_fixed_point(p: Params) -> bool:
    return fixed_points.predicted_count(p) == 0


def convergence_hypotheses(p: Params) -> Hypotheses:
    """Which global-convergence statement covers ``p``.

    All of them require a case of the nonnegativity table. They then split
    on ``gamma``:

    * ``gamma >= sqrt(2) - 1`` with ``beta <= psi(1)``: all of ``M``;
    * ``2/(3 sqrt 3) <= gamma < sqrt(2) - 1``: all of ``M`` when either
      ``theta <= theta_high`` and ``beta <= psi(1)``, or ``theta > theta_high``
      and ``beta < psi(u_hat)``;
    * ``gamma < 2/(3 sqrt 3)``: no positive fixed point, and initial points
      with ``u <= x1`` or ``v < omega(x1)``.
    """
    verdict = nonneg_case(p)
    g = p.gamma
    if not verdict.holds:
        return Hypotheses(None, (), verdict, "no nonnegativity case holds")
    psi1 = model.psi(p, 1.0)
    full = (Region("full_M"),)
    if g >= fixed_points.SQRT2_MINUS_1:
        if p.beta <= psi1:
            return Hypotheses("5.2", full, verdict, "gamma >= sqrt(2)-1 and beta <= psi(1)")
        return Hypotheses(None, (), verdict, "beta > psi(1)")
    if g >= GAMMA_OMEGA:
        t2 = fixed_points.theta_high(p.r, g)
        if p.theta <= t2:
            if p.beta <= psi1:
                return Hypotheses("5.3(i)", full, verdict, "theta <= theta_high and beta <= psi(1)")
            return Hypotheses(None, (), verdict, "beta > psi(1)")
        psi_min = model.psi(p, fixed_points.u_hat(p))
        if p.beta < psi_min:
            return Hypotheses("5.3(ii)", full, verdict, "theta > theta_high and beta < psi(u_hat)")
        return Hypotheses(None, (), verdict, "beta >= psi(u_hat)")
    if not no_positive_fixed_point(p):
        return Hypotheses(None, (), verdict, "a positive fixed point exists")
    xb = omega_critical(p)
    x1 = xb[0]
    regions = (Region("u_below", x1), Region("v_below", model.omega(p, x1)))
    return Hypotheses("5.4", regions, verdict, "gamma < 2/(3 sqrt 3) and no positive fixed point", xb)


__all__ = [
    "KPoly", "NonnegVerdict", "Region", "Hypotheses", "CASE_LABELS",
    "gamma_cubic", "beta_cubic", "cubic_discriminant", "kpoly_min", "nonneg_case",
    "rho", "rho_max", "omega_critical", "convergence_hypotheses", "no_positive_fixed_point",
]
