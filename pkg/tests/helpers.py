"""Shared oracles for the test suite: finite-difference jets and parameter draws."""

import itertools
import math

import numpy as np

from plankton_ns import model
from plankton_ns.model import Params, State

EX1 = dict(r=0.5, theta=4.0, gamma=1.0)
EX2 = dict(r=0.5, theta=5.0, gamma=0.2)

# central stencils (offset -> weight) for derivatives of order 0..3, unit step
STENCILS = {
    0: {0: 1.0},
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
}


def fd_partial(f, i, j, h):
    """Central difference for d^(i+j) f / dx^i dy^j at the origin, O(h^2) error."""
    total = 0.0
    for (ox, wx), (oy, wy) in itertools.product(STENCILS[i].items(), STENCILS[j].items()):
        total += wx * wy * f(ox * h, oy * h)
    return total / h ** (i + j)


def richardson_partial(f, i, j, h):
    """Richardson-extrapolated :func:`fd_partial`, O(h^4) error."""
    return (4.0 * fd_partial(f, i, j, h / 2.0) - fd_partial(f, i, j, h)) / 3.0


def taylor_jet(f, h=2e-3):
    """Polynomial coefficients ``c_ij`` of ``f`` at the origin for ``1 <= i + j <= 3``."""
    out = {}
    for i in range(4):
        for j in range(4 - i):
            if i + j == 0:
                continue
            out[(i, j)] = richardson_partial(f, i, j, h) / (math.factorial(i) * math.factorial(j))
    return out


def fd_jacobian(p, u, v, h=1e-6):
    """Central-difference Jacobian of ``step``."""
    def F(x, y):
        s = model.step(p, State(x, y, escaped=True))
        return np.array([s.u, s.v])
    cols = [(F(u + h, v) - F(u - h, v)) / (2 * h), (F(u, v + h) - F(u, v - h)) / (2 * h)]
    return np.column_stack(cols)


def random_fixed_point_params(rng, n):
    """``n`` draws of (params, u) with ``beta = psi(u)``, so ``u`` is a positive fixed point."""
    out = []
    while len(out) < n:
        r, th, g = rng.uniform(0.1, 1.0), rng.uniform(0.5, 6.0), rng.uniform(0.3, 1.5)
        u = rng.uniform(0.15, 0.9)
        p0 = Params(r, 1.0, th, g)
        out.append((p0.with_beta(model.psi(p0, u)), u))
    return out
