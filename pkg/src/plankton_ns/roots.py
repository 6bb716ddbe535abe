"""Bracketed scalar root finding.

Bisection keeps a guaranteed bracket; an optional Newton polish recovers
fast convergence near the root and is rejected whenever it would leave the
bracket. Polynomial roots are isolated by sign scanning over a Cauchy bound.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import NotFoundError

Func = Callable[[float], float]


def bisect(f: Func, a: float, b: float, xtol: float = 1e-13, maxiter: int = 400,
           fa: float | None = None, fb: float | None = None) -> tuple[float, float]:
    """Shrink a sign-change bracket ``[a, b]`` until its width is below ``xtol``.

    Returns the final bracket as ``(lo, hi)`` with ``lo <= hi``.
    """
    if a > b:
        a, b = b, a
        fa, fb = fb, fa
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a, a
    if fb == 0.0:
        return b, b
    if (fa > 0.0) == (fb > 0.0):
        raise NotFoundError(f"no sign change on [{a!r}, {b!r}]: f(a)={fa!r}, f(b)={fb!r}")
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if fm == 0.0:
            return m, m
        if (fm > 0.0) == (fa > 0.0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return a, b


def bisect_newton(f: Func, fprime: Func | None, a: float, b: float, xtol: float = 1e-13,
                  polish: int = 5) -> float:
    """Root in ``[a, b]``: bisection to ``xtol`` then up to ``polish`` Newton steps."""
    lo, hi = bisect(f, a, b, xtol=xtol)
    x = 0.5 * (lo + hi)
    if fprime is None or lo == hi:
        return x
    # Polish steps must stay inside the original bracket and reduce |f|.
    lo_b, hi_b = min(a, b), max(a, b)
    for _ in range(polish):
        fx = f(x)
        if fx == 0.0:
            break
        d = fprime(x)
        if d == 0.0 or not math.isfinite(d):
            break
        x_new = x - fx / d
        if not (lo_b <= x_new <= hi_b) or abs(f(x_new)) > abs(fx):
            break
        if x_new == x:
            break
        x = x_new
    return x


def scan_brackets(f: Func, a: float, b: float, n: int) -> list[tuple[float, float, float, float]]:
    """Sign changes of ``f`` on a uniform grid of ``n`` subintervals of ``[a, b]``.

    Each entry is ``(x0, x1, f(x0), f(x1))``. A grid node where ``f`` is
    exactly zero yields a degenerate bracket ``(x, x, 0, 0)``.
    """
    xs = np.linspace(a, b, n + 1)
    fs = [f(float(x)) for x in xs]
    out = []
    for i in range(n):
        f0, f1 = fs[i], fs[i + 1]
        if f0 == 0.0:
            out.append((float(xs[i]), float(xs[i]), 0.0, 0.0))
        elif f1 != 0.0 and (f0 > 0.0) != (f1 > 0.0):
            out.append((float(xs[i]), float(xs[i + 1]), f0, f1))
    if fs[-1] == 0.0:
        out.append((float(xs[-1]), float(xs[-1]), 0.0, 0.0))
    return out


def scan_roots(f: Func, a: float, b: float, n: int, xtol: float = 1e-13) -> list[float]:
    """All sign-change roots of ``f`` detectable on an ``n``-cell grid over ``[a, b]``."""
    roots = []
    for x0, x1, f0, f1 in scan_brackets(f, a, b, n):
        if x0 == x1:
            roots.append(x0)
        else:
            lo, hi = bisect(f, x0, x1, xtol=xtol, fa=f0, fb=f1)
            roots.append(0.5 * (lo + hi))
    return roots


def cauchy_bound(coeffs: Sequence[float]) -> float:
    """Upper bound ``1 + max|a_i / a_n|`` on the modulus of every root.

    ``coeffs`` run from the leading term down to the constant.
    """
    lead = coeffs[0]
    if lead == 0.0:
        raise ValueError("leading coefficient must be non-zero")
    return 1.0 + max(abs(c / lead) for c in coeffs[1:])


def polyval(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _polyval_grid(coeffs: Sequence[float], xs: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(xs)
    for c in coeffs:
        acc = acc * xs + c
    return acc


def poly_real_roots(coeffs: Sequence[float], n: int = 10_000, xtol: float = 1e-13,
                    positive_only: bool = False) -> list[float]:
    """Real roots of a polynomial by sign scan on ``[-B, B]`` and bisection.

    ``B`` is the Cauchy bound. The uniform scan grid is augmented with the
    real roots of the derivative (found the same way, recursively), so each
    cell is monotone and two roots closer than the grid spacing are still
    separated. Leading zero coefficients are dropped. Even-multiplicity roots
    produce no sign change and are not reported.
    """
    coeffs = [float(c) for c in coeffs]
    while coeffs and coeffs[0] == 0.0:
        coeffs.pop(0)
    if len(coeffs) < 2:
        return []
    if len(coeffs) == 2:
        root = -coeffs[1] / coeffs[0]
        return [root] if (root > 0.0 or not positive_only) else []
    bound = cauchy_bound(coeffs)
    lo = 0.0 if positive_only else -bound
    deg = len(coeffs) - 1
    deriv = [c * (deg - i) for i, c in enumerate(coeffs[:-1])]
    crit = [x for x in poly_real_roots(deriv, n=n, xtol=xtol) if lo < x < bound]
    xs = np.unique(np.concatenate([np.linspace(lo, bound, n + 1), np.asarray(crit, dtype=float)]))
    fs = _polyval_grid(coeffs, xs)
    f = lambda x: polyval(coeffs, x)  # noqa: E731
    roots = []
    for i in range(len(xs) - 1):
        f0, f1 = float(fs[i]), float(fs[i + 1])
        if f0 == 0.0:
            roots.append(float(xs[i]))
        elif f1 != 0.0 and (f0 > 0.0) != (f1 > 0.0):
            a, b = bisect(f, float(xs[i]), float(xs[i + 1]), xtol=xtol, fa=f0, fb=f1)
            roots.append(0.5 * (a + b))
    if fs[-1] == 0.0:
        roots.append(float(xs[-1]))
    if positive_only:
        roots = [x for x in roots if x > 0.0]
    return roots
