# cython: language_level=3
"""Compiled iteration kernels.

Line-for-line port of ``_pykernels``; see that module for the contracts.
The inner loops run without the GIL so callers can spread independent
parameter values over threads.
"""

import numpy as np
from libc.math cimport sqrt, log, isfinite, INFINITY, NAN, fabs

cdef enum:
    C_OK = 0
    C_ESCAPED = 1
    C_UNDERFLOW = 2
    C_NONFINITE = 3
    C_MAX_ITER = 2

MONO_RTOL = 1e-12
OK = C_OK
ESCAPED = C_ESCAPED
UNDERFLOW = C_UNDERFLOW
NONFINITE = C_NONFINITE
MAX_ITER = C_MAX_ITER

cdef double _MONO = 1e-12


cdef inline bint _outside(double u, double v) noexcept nogil:
    return not (0.0 <= u <= 2.0 and 0.0 <= v < INFINITY)


cdef inline bint _in_m(double g, double u, double v) noexcept nogil:
    if not (0.0 <= u <= 1.0 and v >= 0.0):
        return False
    if u == 0.0:
        return True
    return v <= (2.0 - u) * (g * g + u * u) / u


cdef long _orbit(double r, double b, double th, double g, double u0, double v0,
                 long n, long keep_from, double tol, long sustain,
                 double[::1] out_u, double[::1] out_v,
                 long* esc, long* conv) noexcept nogil:
    cdef double u = u0, v = v0, G, gr, un, vn, du, dv, disp
    cdef long count = 0, run = 0, run_start = 0, k
    esc[0] = -1
    conv[0] = -1
    for k in range(n):
        G = g * g + u * u
        gr = u * u / G
        un = u * (2.0 - u) - gr * v
        vn = b * gr * v + (1.0 - r) * v - th * u * v / (g + u)
        du = un - u
        dv = vn - v
        disp = sqrt(du * du + dv * dv)
        if disp < tol:
            if run == 0:
                run_start = k
            run += 1
        else:
            run = 0
        u = un
        v = vn
        if _outside(u, v):
            esc[0] = k + 1
            return count
        if k + 1 > keep_from:
            out_u[count] = u
            out_v[count] = v
            count += 1
    if run >= sustain or (run == n and n > 0):
        conv[0] = run_start
    return count


def orbit(double r, double b, double th, double g, double u0, double v0, long n,
          long keep_from, double tol, long sustain, double[::1] out_u, double[::1] out_v):
    cdef long esc, conv, count
    with nogil:
        count = _orbit(r, b, th, g, u0, v0, n, keep_from, tol, sustain, out_u, out_v, &esc, &conv)
    return count, esc, conv


cdef double _lyapunov(double r, double b, double th, double g, double u0, double v0,
                      long n, long transient, bint allow_escape,
                      int* code, long* step) noexcept nogil:
    cdef double u = u0, v = v0, G, G2, gu, gr, un, vn
    cdef double j11, j12, j21, j22, a, c, nr
    cdef double tx = 1.0 / sqrt(2.0)
    cdef double ty = tx
    cdef double acc = 0.0
    cdef long k
    for k in range(n):
        G = g * g + u * u
        G2 = G * G
        gu = g + u
        if gu == 0.0:
            code[0] = C_NONFINITE
            step[0] = k
            return NAN
        if k >= transient:
            j11 = 2.0 - 2.0 * u - 2.0 * g * g * u * v / G2
            j12 = -(u * u) / G
            j21 = g * v * (2.0 * b * g * u / G2 - th / (gu * gu))
            j22 = 1.0 - r + b * u * u / G - th * u / gu
            a = j11 * tx + j12 * ty
            c = j21 * tx + j22 * ty
            nr = sqrt(a * a + c * c)
            if nr == 0.0:
                code[0] = C_UNDERFLOW
                step[0] = k
                return NAN
            if not isfinite(nr):
                code[0] = C_NONFINITE
                step[0] = k
                return NAN
            acc += log(nr)
            tx = a / nr
            ty = c / nr
        gr = u * u / G
        un = u * (2.0 - u) - gr * v
        vn = b * gr * v + (1.0 - r) * v - th * u * v / gu
        u = un
        v = vn
        if not (isfinite(u) and isfinite(v)):
            code[0] = C_NONFINITE
            step[0] = k + 1
            return NAN
        if not allow_escape and _outside(u, v):
            code[0] = C_ESCAPED
            step[0] = k + 1
            return NAN
    code[0] = C_OK
    step[0] = n
    return acc / (n - transient)


def lyapunov(double r, double b, double th, double g, double u0, double v0, long n,
             long transient, bint allow_escape):
    cdef int code
    cdef long step
    cdef double mle
    with nogil:
        mle = _lyapunov(r, b, th, g, u0, v0, n, transient, allow_escape, &code, &step)
    return mle, code, step


cdef int _converge(double r, double b, double th, double g, double u0, double v0,
                   long max_iter, double tol, long sustain,
                   long* steps, double* uf, double* vf, bint* mono_out, bint* inm_out) noexcept nogil:
    cdef double u = u0, v = v0, G, gr, un, vn, du, dv, disp
    cdef long run = 0, run_start = 0, k
    cdef bint mono = True
    cdef bint in_m = _in_m(g, u, v)
    for k in range(max_iter):
        G = g * g + u * u
        gr = u * u / G
        un = u * (2.0 - u) - gr * v
        vn = b * gr * v + (1.0 - r) * v - th * u * v / (g + u)
        if vn > v + _MONO * fabs(v):
            mono = False
        du = un - u
        dv = vn - v
        disp = sqrt(du * du + dv * dv)
        u = un
        v = vn
        if _outside(u, v):
            steps[0] = k + 1
            uf[0] = u
            vf[0] = v
            mono_out[0] = mono
            inm_out[0] = False
            return C_ESCAPED
        if in_m and not _in_m(g, u, v):
            in_m = False
        if disp < tol:
            if run == 0:
                run_start = k
            run += 1
            if run >= sustain:
                steps[0] = run_start
                uf[0] = u
                vf[0] = v
                mono_out[0] = mono
                inm_out[0] = in_m
                return C_OK
        else:
            run = 0
    steps[0] = max_iter
    uf[0] = u
    vf[0] = v
    mono_out[0] = mono
    inm_out[0] = in_m
    return C_MAX_ITER


def converge(double r, double b, double th, double g, double u0, double v0,
             long max_iter, double tol, long sustain):
    cdef long steps
    cdef double uf, vf
    cdef bint mono, inm
    cdef int code
    with nogil:
        code = _converge(r, b, th, g, u0, v0, max_iter, tol, sustain, &steps, &uf, &vf, &mono, &inm)
    return code, steps, uf, vf, bool(mono), bool(inm)


def converge_many(double r, double b, double th, double g, u0s, v0s,
                  long max_iter, double tol, long sustain):
    cdef double[::1] us = np.ascontiguousarray(u0s, dtype=np.float64)
    cdef double[::1] vs = np.ascontiguousarray(v0s, dtype=np.float64)
    cdef Py_ssize_t m = us.shape[0], i
    codes = np.empty(m, dtype=np.int64)
    steps = np.empty(m, dtype=np.int64)
    uf = np.empty(m)
    vf = np.empty(m)
    mono = np.empty(m, dtype=np.uint8)
    inm = np.empty(m, dtype=np.uint8)
    cdef long long[::1] codes_v = codes
    cdef long long[::1] steps_v = steps
    cdef double[::1] uf_v = uf
    cdef double[::1] vf_v = vf
    cdef unsigned char[::1] mono_v = mono
    cdef unsigned char[::1] inm_v = inm
    cdef long st
    cdef double a, c
    cdef bint mo, im
    with nogil:
        for i in range(m):
            codes_v[i] = _converge(r, b, th, g, us[i], vs[i], max_iter, tol, sustain,
                                   &st, &a, &c, &mo, &im)
            steps_v[i] = st
            uf_v[i] = a
            vf_v[i] = c
            mono_v[i] = mo
            inm_v[i] = im
    return codes, steps, uf, vf, mono.astype(bool), inm.astype(bool)


def sweep(double r, double th, double g, betas, double u0, double v0, long n, long transient,
          long keep, bint allow_escape, double tol, long sustain,
          double[:, ::1] out_u, double[:, ::1] out_v, double[::1] mle,
          long long[::1] esc, long long[::1] code):
    cdef double[::1] bs = np.ascontiguousarray(betas, dtype=np.float64)
    cdef double[::1] buf_u = np.empty(keep)
    cdef double[::1] buf_v = np.empty(keep)
    cdef Py_ssize_t i, j, nb = bs.shape[0]
    cdef long cnt, e, cv, st
    cdef int cd
    with nogil:
        for i in range(nb):
            cnt = _orbit(r, bs[i], th, g, u0, v0, n, n - keep, tol, sustain, buf_u, buf_v, &e, &cv)
            esc[i] = e
            for j in range(keep):
                if e >= 0:
                    out_u[i, j] = NAN
                    out_v[i, j] = NAN
                else:
                    out_u[i, j] = buf_u[j]
                    out_v[i, j] = buf_v[j]
            mle[i] = _lyapunov(r, bs[i], th, g, u0, v0, n, transient, allow_escape, &cd, &st)
            code[i] = cd
