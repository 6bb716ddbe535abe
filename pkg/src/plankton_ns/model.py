"""The plankton map, its Jacobians and the closed-form helper functions.

The map acts on scaled densities ``(u, v)`` of phytoplankton and zooplankton::

    u' = u(2 - u) - u^2 v / (gamma^2 + u^2)
    v' = beta u^2 v / (gamma^2 + u^2) + (1 - r) v - theta u v / (gamma + u)

Everything here is a pure function of its arguments. Parameters are
validated once, when :class:`Params` is built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConsistencyError, DomainError, EscapeError

#: Relative tolerance on ``|beta - Psi(u)|`` for a point to count as fixed.
FIXED_POINT_TOL = 1e-8


@dataclass(frozen=True)
class Params:
    """Model parameters ``(r, beta, theta, gamma)``, all strictly positive.

    r is the zooplankton mortality, beta the conversion efficiency, theta
    the toxin mortality rate and gamma the half-saturation constant.
    """

    r: float
    beta: float
    theta: float
    gamma: float

    def __post_init__(self):
        for name in ("r", "beta", "theta", "gamma"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise DomainError(f"{name} must be a real number, got {value!r}") from None
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
            object.__setattr__(self, name, value)

    def with_beta(self, beta: float) -> "Params":
        return replace(self, beta=beta)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.r, self.beta, self.theta, self.gamma)


@dataclass(frozen=True)
class State:
    """A phase-space point. Negative coordinates require ``escaped=True``."""

    u: float
    v: float
    escaped: bool = False

    def __post_init__(self):
        u, v = float(self.u), float(self.v)
        if not (math.isfinite(u) and math.isfinite(v)):
            raise EscapeError(f"non-finite state ({u!r}, {v!r})",
                              coordinate="u" if not math.isfinite(u) else "v")
        if not self.escaped and (u < 0.0 or v < 0.0):
            raise DomainError(f"negative state ({u!r}, {v!r}) must be flagged as escaped")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def as_tuple(self) -> tuple[float, float]:
        return (self.u, self.v)


@dataclass(frozen=True)
class Jacobian2:
    """A real 2x2 matrix ``[[j11, j12], [j21, j22]]``."""

    j11: float
    j12: float
    j21: float
    j22: float

    @property
    def trace(self) -> float:
        return self.j11 + self.j22

    @property
    def det(self) -> float:
        return self.j11 * self.j22 - self.j12 * self.j21

    def as_array(self) -> np.ndarray:
        return np.array([[self.j11, self.j12], [self.j21, self.j22]])

    def eigenvalues(self) -> tuple[complex, complex]:
        """Roots of ``lambda^2 - trace*lambda + det``, negative imaginary part first."""
        tr, det = self.trace, self.det
        disc = tr * tr - 4.0 * det
        if disc >= 0.0:
            s = math.sqrt(disc)
            return complex((tr - s) / 2.0), complex((tr + s) / 2.0)
        s = math.sqrt(-disc)
        return complex(tr / 2.0, -s / 2.0), complex(tr / 2.0, s / 2.0)


def step(p: Params, s: State) -> State:
    """Apply the map once.

    A negative result comes back flagged ``escaped=True``. It is never
    clamped. A non-finite result raises :class:`EscapeError`.
    """
    u, v = s.u, s.v
    g = p.gamma
    G = g * g + u * u
    graze = u * u / G
    u_next = u * (2.0 - u) - graze * v
    v_next = p.beta * graze * v + (1.0 - p.r) * v - p.theta * u * v / (g + u)
    for name, value in (("u", u_next), ("v", v_next)):
        if not math.isfinite(value):
            raise EscapeError(f"{name} became non-finite ({value!r})", coordinate=name)
    escaped = s.escaped or u_next < 0.0 or v_next < 0.0
    return State(u_next, v_next, escaped=escaped)


def psi(p: Params, u: float) -> float:
    """The beta value for which ``u`` is the abscissa of a positive fixed point."""
    if not u > 0.0:
        raise DomainError(f"psi requires u > 0, got {u!r}")
    r, th, g = p.r, p.theta, p.gamma
    return (r * u + th * u + r * g) * (g * g + u * u) / (u * u * (g + u))


def psi_prime(p: Params, u: float) -> float:
    """Derivative of :func:`psi`, ``gamma h(u) / (u^3 (u + gamma)^2)``."""
    if not u > 0.0:
        raise DomainError(f"psi_prime requires u > 0, got {u!r}")
    g = p.gamma
    return g * h_poly(p, u) / (u ** 3 * (u + g) ** 2)


def h_poly(p: Params, u: float) -> float:
    """Cubic whose sign is the sign of ``psi'``."""
    r, th, g = p.r, p.theta, p.gamma
    return th * u ** 3 - 2.0 * g * (r + th) * u ** 2 - g * g * (4.0 * r + th) * u - 2.0 * r * g ** 3


def h_prime(p: Params, u: float) -> float:
    r, th, g = p.r, p.theta, p.gamma
    return 3.0 * th * u * u - 4.0 * g * (r + th) * u - g * g * (4.0 * r + th)


def h_coefficients(p: Params) -> tuple[float, float, float, float]:
    """Coefficients of ``h`` from the cubic term down."""
    r, th, g = p.r, p.theta, p.gamma
    return (th, -2.0 * g * (r + th), -g * g * (4.0 * r + th), -2.0 * r * g ** 3)


def h_prime_roots(p: Params) -> tuple[float, float]:
    """The two critical points of ``h``; the first is negative, the second positive."""
    r, th, g = p.r, p.theta, p.gamma
    root = g * math.sqrt(7.0 * th * th + 20.0 * r * th + 4.0 * r * r)
    base = 2.0 * g * (r + th)
    return (base - root) / (3.0 * th), (base + root) / (3.0 * th)


def v_of_u(p: Params, u: float) -> float:
    """Zooplankton coordinate of the fixed point with abscissa ``u``."""
    if not u > 0.0:
        raise DomainError(f"v_of_u requires u > 0, got {u!r}")
    g = p.gamma
    return (1.0 - u) * (g * g + u * u) / u


def omega(p: Params, u: float) -> float:
    """Upper boundary ``(2 - u)(gamma^2 + u^2)/u`` of the trapping region M."""
    if not u > 0.0:
        raise DomainError(f"omega requires u > 0, got {u!r}")
    g = p.gamma
    return (2.0 - u) * (g * g + u * u) / u


def jacobian(p: Params, s: State) -> Jacobian2:
    """Jacobian of :func:`step` at an arbitrary point."""
    u, v = s.u, s.v
    r, b, th, g = p.r, p.beta, p.theta, p.gamma
    if g + u == 0.0:
        raise DomainError("jacobian undefined at u = -gamma")
    G = g * g + u * u
    return Jacobian2(
        2.0 - 2.0 * u - 2.0 * g * g * u * v / (G * G),
        -u * u / G,
        g * v * (2.0 * b * g * u / (G * G) - th / (g + u) ** 2),
        1.0 - r + b * u * u / G - th * u / (g + u),
    )


def check_fixed(p: Params, u_star: float, tol: float = FIXED_POINT_TOL) -> None:
    """Raise :class:`ConsistencyError` unless ``beta = psi(u_star)`` to ``tol`` (relative)."""
    if not 0.0 < u_star < 1.0:
        raise ConsistencyError(f"positive fixed point needs u in (0, 1), got {u_star!r}")
    resid = abs(p.beta - psi(p, u_star))
    if resid > tol * max(1.0, p.beta):
        raise ConsistencyError(
            f"u={u_star!r} is not a fixed point for beta={p.beta!r}: |beta - psi(u)| = {resid:.3e}"
        )


def _toxin_bracket(p: Params, u: float) -> float:
    # 2 beta gamma u / (gamma^2+u^2)^2 - theta / (gamma+u)^2
    g = p.gamma
    G = g * g + u * u
    return 2.0 * p.beta * g * u / (G * G) - p.theta / (g + u) ** 2


def jacobian_at_fixed(p: Params, u_star: float) -> Jacobian2:
    """Jacobian at a positive fixed point, simplified using ``beta = psi(u_star)``."""
    check_fixed(p, u_star)
    u, g = u_star, p.gamma
    G = g * g + u * u
    return Jacobian2(
        2.0 * u * u * (1.0 - u) / G,
        -u * u / G,
        g * (1.0 - u) * G / u * _toxin_bracket(p, u),
        1.0,
    )


def p_of_u(p: Params, u: float) -> float:
    """Trace of the Jacobian at a positive fixed point."""
    g = p.gamma
    return 1.0 + 2.0 * u * u * (1.0 - u) / (g * g + u * u)


def q_of_u(p: Params, u: float) -> float:
    """Determinant of the Jacobian at a positive fixed point (uses ``p.beta``)."""
    g = p.gamma
    G = g * g + u * u
    return 2.0 * u * u * (1.0 - u) / G + g * u * (1.0 - u) * _toxin_bracket(p, u)


def char_poly_at_one(p: Params, u: float) -> float:
    """``1 - p(u) + q(u)`` in the factored form valid at fixed points."""
    g = p.gamma
    return -g * (1.0 - u) * h_poly(p, u) / ((g + u) ** 2 * (g * g + u * u))
