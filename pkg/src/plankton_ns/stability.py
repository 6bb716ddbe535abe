"""Root location of real quadratics and the type of positive fixed points.

A quadratic ``F(lambda) = lambda^2 + B lambda + C`` is classified from the
signs of ``F(1)``, ``F(-1)`` and ``C - 1``. Equalities are measure-zero in
floating point, so every equality test uses the band :data:`TAU`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import model
from .errors import InvariantViolation
from .model import Params

TAU = 1e-9


class RootLocation(str, Enum):
    BOTH_INSIDE = "both_inside"
    BOTH_OUTSIDE = "both_outside"
    SADDLE_SPLIT = "saddle_split"
    ON_UNIT_CIRCLE_COMPLEX = "on_unit_circle_complex"
    ROOT_AT_MINUS_ONE = "root_at_minus_one"
    DOUBLE_MINUS_ONE = "double_minus_one"
    ROOT_AT_PLUS_ONE = "root_at_plus_one"
    ONE_OUTSIDE_OTHER_INSIDE = "one_outside_other_inside"
    ONE_OUTSIDE_OTHER_LEQ_MINUS_ONE = "one_outside_other_leq_minus_one"


class Kind(str, Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    SADDLE = "saddle"
    NONHYPERBOLIC = "nonhyperbolic"


@dataclass(frozen=True)
class CharPoly:
    """``lambda^2 + B lambda + C``."""

    B: float
    C: float

    @property
    def at_one(self) -> float:
        return 1.0 + self.B + self.C

    @property
    def at_minus_one(self) -> float:
        return 1.0 - self.B + self.C

    def roots(self) -> tuple[complex, complex]:
        disc = self.B * self.B - 4.0 * self.C
        if disc >= 0.0:
            s = math.sqrt(disc)
            return complex((-self.B - s) / 2.0), complex((-self.B + s) / 2.0)
        s = math.sqrt(-disc)
        return complex(-self.B / 2.0, -s / 2.0), complex(-self.B / 2.0, s / 2.0)


def char_poly_at(p: Params, u_star: float) -> CharPoly:
    """Characteristic polynomial of the Jacobian at the positive fixed point ``u_star``."""
    model.check_fixed(p, u_star)
    return CharPoly(B=-model.p_of_u(p, u_star), C=model.q_of_u(p, u_star))


def jury_classify(cp: CharPoly, tau: float = TAU) -> RootLocation:
    f1, fm1, C, B = cp.at_one, cp.at_minus_one, cp.C, cp.B
    if abs(f1) <= tau:
        return RootLocation.ROOT_AT_PLUS_ONE
    if f1 > 0.0:
        if abs(fm1) <= tau:
            if abs(B - 2.0) <= tau:
                return RootLocation.DOUBLE_MINUS_ONE
            return RootLocation.ROOT_AT_MINUS_ONE
        if fm1 < 0.0:
            return RootLocation.ONE_OUTSIDE_OTHER_INSIDE
        if C < 1.0 - tau:
            return RootLocation.BOTH_INSIDE
        if C > 1.0 + tau:
            return RootLocation.BOTH_OUTSIDE
        # C == 1 with F(1) > 0 and F(-1) > 0 forces -2 < B < 2.
        return RootLocation.ON_UNIT_CIRCLE_COMPLEX
    if fm1 <= tau:
        return RootLocation.ONE_OUTSIDE_OTHER_LEQ_MINUS_ONE
    return RootLocation.SADDLE_SPLIT


_SADDLES = {RootLocation.SADDLE_SPLIT, RootLocation.ONE_OUTSIDE_OTHER_INSIDE}


def classify_E(p: Params, fp, tau: float = TAU) -> Kind:
    """Type of a positive fixed point record (``fp.branch`` is ``"E1"`` or ``"E2"``).

    E1 is typed by its determinant ``q``. E2 is classified from its
    characteristic polynomial and must come out a saddle; anything else
    raises :class:`InvariantViolation`.
    """
    branch = getattr(fp, "branch", None)
    if branch == "E1":
        q = model.q_of_u(p, fp.u)
        if q < 1.0 - tau:
            return Kind.ATTRACTING
        if q > 1.0 + tau:
            return Kind.REPELLING
        return Kind.NONHYPERBOLIC
    if branch == "E2":
        loc = jury_classify(char_poly_at(p, fp.u), tau)
        if loc not in _SADDLES:
            raise InvariantViolation(
                f"E2 at u={fp.u!r} for {p} classified {loc.value}, expected a saddle"
            )
        return Kind.SADDLE
    raise ValueError(f"classify_E expects branch E1 or E2, got {branch!r}")


def kind_from_moduli(m1: float, m2: float, tau: float = TAU) -> Kind:
    """Type of a fixed point from its two eigenvalue moduli."""
    if abs(m1 - 1.0) <= tau or abs(m2 - 1.0) <= tau:
        return Kind.NONHYPERBOLIC
    inside = (m1 < 1.0) + (m2 < 1.0)
    return {2: Kind.ATTRACTING, 1: Kind.SADDLE, 0: Kind.REPELLING}[inside]
