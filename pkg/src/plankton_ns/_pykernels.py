"""Pure-Python iteration kernels.

Reference implementation and fallback for the compiled ``_ckernels``
module. Both backends evaluate every expression in the same order, so on
IEEE-754 hardware without fused multiply-add they agree bit for bit.
"""

import math

import numpy as np

MONO_RTOL = 1e-12

# status codes shared with the compiled backend
OK = 0
ESCAPED = 1
UNDERFLOW = 2
NONFINITE = 3
MAX_ITER = 2


def _outside(u, v):
    return not (0.0 <= u <= 2.0 and 0.0 <= v < math.inf)


def orbit(r, b, th, g, u0, v0, n, keep_from, tol, sustain, out_u, out_v):
    """Iterate ``n`` times, writing states ``keep_from+1 .. n`` into the outputs.

    Stops at the first state outside ``[0, 2] x [0, inf)``. Returns
    ``(count, esc_step, conv_start)``: the number of states written, the
    index of the escaping state (-1 if none) and the first step of the
    trailing run of ``>= sustain`` displacements below ``tol`` (-1 if none).
    """
    u = u0
    v = v0
    count = 0
    run = 0
    run_start = 0
    for k in range(n):
        G = g * g + u * u
        gr = u * u / G
        un = u * (2.0 - u) - gr * v
        vn = b * gr * v + (1.0 - r) * v - th * u * v / (g + u)
        du = un - u
        dv = vn - v
        disp = math.sqrt(du * du + dv * dv)
        if disp < tol:
            if run == 0:
                run_start = k
            run += 1
        else:
            run = 0
        u = un
        v = vn
        if _outside(u, v):
            return count, k + 1, -1
        if k + 1 > keep_from:
            out_u[count] = u
            out_v[count] = v
            count += 1
    # a run covering the whole orbit also counts, so short orbits from a fixed point converge
    return count, -1, (run_start if (run >= sustain or (run == n and n > 0)) else -1)


def lyapunov(r, b, th, g, u0, v0, n, transient, allow_escape):
    """Maximal Lyapunov exponent along the orbit of ``(u0, v0)``.

    Returns ``(mle, code, step)``. ``code`` is ``OK``, ``ESCAPED`` (orbit
    left the quadrant and ``allow_escape`` is false), ``UNDERFLOW`` or
    ``NONFINITE``; ``step`` is where that happened.
    """
    u = u0
    v = v0
    tx = 1.0 / math.sqrt(2.0)
    ty = tx
    acc = 0.0
    for k in range(n):
        G = g * g + u * u
        G2 = G * G
        gu = g + u
        if gu == 0.0:
            return math.nan, NONFINITE, k
        if k >= transient:
            j11 = 2.0 - 2.0 * u - 2.0 * g * g * u * v / G2
            j12 = -(u * u) / G
            j21 = g * v * (2.0 * b * g * u / G2 - th / (gu * gu))
            j22 = 1.0 - r + b * u * u / G - th * u / gu
            a = j11 * tx + j12 * ty
            c = j21 * tx + j22 * ty
            nr = math.sqrt(a * a + c * c)
            if nr == 0.0:
                return math.nan, UNDERFLOW, k
            if not math.isfinite(nr):
                return math.nan, NONFINITE, k
            acc += math.log(nr)
            tx = a / nr
            ty = c / nr
        gr = u * u / G
        un = u * (2.0 - u) - gr * v
        vn = b * gr * v + (1.0 - r) * v - th * u * v / gu
        u = un
        v = vn
        if not (math.isfinite(u) and math.isfinite(v)):
            return math.nan, NONFINITE, k + 1
        if not allow_escape and _outside(u, v):
            return math.nan, ESCAPED, k + 1
    return acc / (n - transient), OK, n


def converge(r, b, th, g, u0, v0, max_iter, tol, sustain):
    """Iterate until ``sustain`` consecutive displacements fall below ``tol``.

    Returns ``(code, steps, u, v, v_monotone, in_M)`` where ``code`` is
    ``OK`` (converged), ``ESCAPED`` or ``MAX_ITER``; ``steps`` is the first
    step of the converged run (or the step count reached). ``v_monotone``
    records that ``v`` never increased by more than ``MONO_RTOL`` relative,
    ``in_M`` that every state satisfied ``0 <= u <= 1, 0 <= v <= omega(u)``.
    """
    u = u0
    v = v0
    run = 0
    run_start = 0
    mono = True
    in_m = _in_m(g, u, v)
    for k in range(max_iter):
        G = g * g + u * u
        gr = u * u / G
        un = u * (2.0 - u) - gr * v
        vn = b * gr * v + (1.0 - r) * v - th * u * v / (g + u)
        if vn > v + MONO_RTOL * abs(v):
            mono = False
        du = un - u
        dv = vn - v
        disp = math.sqrt(du * du + dv * dv)
        u = un
        v = vn
        if _outside(u, v):
            return ESCAPED, k + 1, u, v, mono, False
        if in_m and not _in_m(g, u, v):
            in_m = False
        if disp < tol:
            if run == 0:
                run_start = k
            run += 1
            if run >= sustain:
                return OK, run_start, u, v, mono, in_m
        else:
            run = 0
    return MAX_ITER, max_iter, u, v, mono, in_m


def _in_m(g, u, v):
    if not (0.0 <= u <= 1.0 and v >= 0.0):
        return False
    if u == 0.0:
        return True
    return v <= (2.0 - u) * (g * g + u * u) / u


def converge_many(r, b, th, g, u0s, v0s, max_iter, tol, sustain):
    """:func:`converge` over arrays of starting points."""
    m = len(u0s)
    codes = np.empty(m, dtype=np.int64)
    steps = np.empty(m, dtype=np.int64)
    uf = np.empty(m)
    vf = np.empty(m)
    mono = np.empty(m, dtype=np.uint8)
    inm = np.empty(m, dtype=np.uint8)
    for i in range(m):
        res = converge(r, b, th, g, float(u0s[i]), float(v0s[i]), max_iter, tol, sustain)
        codes[i], steps[i], uf[i], vf[i], mono[i], inm[i] = res
    return codes, steps, uf, vf, mono.astype(bool), inm.astype(bool)


def sweep(r, th, g, betas, u0, v0, n, transient, keep, allow_escape, tol, sustain,
          out_u, out_v, mle, esc, code):
    """Per-beta orbit plus Lyapunov exponent.

    ``out_u``/``out_v`` have shape ``(len(betas), keep)`` and receive the last
    ``keep`` states; rows of escaped orbits are filled with NaN.
    """
    buf_u = np.empty(keep)
    buf_v = np.empty(keep)
    for i in range(len(betas)):
        b = float(betas[i])
        cnt, e, _ = orbit(r, b, th, g, u0, v0, n, n - keep, tol, sustain, buf_u, buf_v)
        esc[i] = e
        if e >= 0:
            out_u[i, :] = math.nan
            out_v[i, :] = math.nan
        else:
            out_u[i, :] = buf_u[:cnt]
            out_v[i, :] = buf_v[:cnt]
        mle[i], code[i], _ = lyapunov(r, b, th, g, u0, v0, n, transient, allow_escape)
