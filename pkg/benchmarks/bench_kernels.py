"""Time the compiled and pure-Python kernels on the same workloads.

Run with ``python3 benchmarks/bench_kernels.py``. Each row reports the best
of ``--repeat`` runs per backend, the speed-up, and whether both backends
produced identical results.
"""

import argparse
import time

import numpy as np

from plankton_ns import kernels


def workloads(scale):
    r, th, g = 0.5, 4.0, 1.0
    n = int(20_000 * scale)

    def orbit(k):
        ou, ov = np.empty(200), np.empty(200)
        res = k.orbit(r, 8.0, th, g, 0.1, 0.3, n, n - 200, 1e-10, 100, ou, ov)
        return res, ou.tobytes(), ov.tobytes()

    def lyap(k):
        return k.lyapunov(r, 8.0, th, g, 0.1, 0.3, n, n // 4, False)

    def conv(k):
        us = np.linspace(0.02, 1.0, int(50 * scale) or 1)
        vs = np.full_like(us, 0.5)
        out = k.converge_many(0.5, 1.4, 1.0, 0.5, us, vs, 1_000_000, 1e-10, 100)
        return tuple(a.tobytes() for a in out)

    def sweep(k):
        betas = np.linspace(4.0, 11.0, 8)
        m, keep = len(betas), 50
        u, v, mle = np.empty((m, keep)), np.empty((m, keep)), np.empty(m)
        esc, code = np.empty(m, dtype=np.int64), np.empty(m, dtype=np.int64)
        k.sweep(r, th, g, betas, 0.1, 0.3, n // 4, n // 8, keep, True, 1e-10, 100, u, v, mle, esc, code)
        return u.tobytes(), v.tobytes(), mle.tobytes(), esc.tobytes()

    return {"orbit": orbit, "lyapunov": lyap, "converge_many": conv, "sweep": sweep}


def best_time(fn, mod, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(mod)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0, help="multiply iteration counts")
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernel not available; only the Python backend can be timed")
    print(f"{'kernel':<15}{'python [s]':>12}{'cython [s]':>12}{'speed-up':>10}  identical")
    for name, fn in workloads(args.scale).items():
        tp, outp = best_time(fn, backends["python"], args.repeat)
        if "cython" in backends:
            tc, outc = best_time(fn, backends["cython"], args.repeat)
            print(f"{name:<15}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.1f}  {outp == outc}")
        else:
            print(f"{name:<15}{tp:>12.4f}{'-':>12}{'-':>10}  -")


if __name__ == "__main__":
    main()
