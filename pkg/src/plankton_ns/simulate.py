"""Trajectories, bifurcation sweeps, Lyapunov exponents and convergence scans.

All iteration goes through :mod:`plankton_ns.kernels`, so results do not
depend on which backend is active. Nothing here is random: grids and
lattices are deterministic and parallel work is merged in grid order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import fixed_points, global_dynamics, kernels, model
from .errors import DomainError, EscapeError, NotApplicableError, UnderflowError
from .model import Params, State

CONV_TOL = 1e-10
CONV_SUSTAIN = 100
MAX_ITER = 1_000_000
DEFAULT_TRANSIENT = 5000
DEFAULT_KEEP = 200
IDENTIFY_TOL = 1e-6
OMEGA_MARGIN = 1e-6


def _as_state(init) -> State:
    if isinstance(init, State):
        return init
    u, v = init
    return State(float(u), float(v))


# ---------------------------------------------------------------------------
# status and identification


@dataclass(frozen=True)
class Status:
    """Outcome of a trajectory.

    ``kind`` is ``converged_to``, ``limit_set``, ``escaped`` or ``max_iter``.
    ``label`` and ``point`` name the fixed point reached, ``step`` is the
    convergence or escape step, and ``radius``/``centroid`` describe a limit
    set by the spread of the kept samples about their mean.
    """

    kind: str
    point: Optional[tuple[float, float]] = None
    label: Optional[str] = None
    step: Optional[int] = None
    radius: Optional[float] = None
    centroid: Optional[tuple[float, float]] = None


def identify(p: Params, u: float, v: float, tol: float = IDENTIFY_TOL,
             fps: Optional[list] = None) -> Optional[str]:
    """Label of the fixed point within ``tol`` of ``(u, v)``, if any."""
    fps = fixed_points.all_fixed_points(p) if fps is None else fps
    best, dist = None, math.inf
    for fp in fps:
        d = math.hypot(u - fp.u, v - fp.v)
        if d < dist:
            best, dist = fp, d
    if best is None or dist > tol:
        return None
    return {"origin": "(0,0)", "boundary": "(1,0)"}.get(best.branch, best.branch)


# ---------------------------------------------------------------------------
# trajectories


@dataclass(frozen=True)
class TrajectoryResult:
    """States ``x_t`` for ``t = first_step .. first_step + len(samples) - 1``."""

    samples: np.ndarray  # shape (k, 2)
    status: Status
    first_step: int

    @property
    def steps(self) -> np.ndarray:
        return np.arange(self.first_step, self.first_step + len(self.samples))

    def states(self) -> list[State]:
        return [State(float(u), float(v)) for u, v in self.samples]


def trajectory(p: Params, init, n: int, transient: int = 0,
               tol: float = CONV_TOL, sustain: int = CONV_SUSTAIN) -> TrajectoryResult:
    """Iterate ``n`` times from ``init`` and keep the states from ``transient`` on.

    The status is ``escaped`` if a state left ``[0, 2] x [0, inf)``,
    ``converged_to`` if the last ``sustain`` displacements were all below
    ``tol``, ``limit_set`` if a transient was discarded and the orbit is
    still moving, and ``max_iter`` otherwise.
    """
    if not (n > transient >= 0):
        raise DomainError(f"need n > transient >= 0, got n={n}, transient={transient}")
    s0 = _as_state(init)
    size = n - transient + 1
    out_u = np.empty(size)
    out_v = np.empty(size)
    if transient == 0:
        out_u[0], out_v[0] = s0.u, s0.v
        cnt, esc, conv = kernels.orbit(p.r, p.beta, p.theta, p.gamma, s0.u, s0.v, n, 0,
                                       tol, sustain, out_u[1:], out_v[1:])
        cnt += 1
    else:
        cnt, esc, conv = kernels.orbit(p.r, p.beta, p.theta, p.gamma, s0.u, s0.v, n,
                                       transient - 1, tol, sustain, out_u, out_v)
    samples = np.column_stack([out_u[:cnt], out_v[:cnt]])
    if esc >= 0:
        status = Status("escaped", step=int(esc))
    elif conv >= 0:
        u, v = samples[-1]
        status = Status("converged_to", point=(float(u), float(v)),
                        label=identify(p, float(u), float(v)), step=int(conv))
    elif transient > 0:
        c = samples.mean(axis=0)
        rad = float(np.max(np.hypot(samples[:, 0] - c[0], samples[:, 1] - c[1])))
        status = Status("limit_set", radius=rad, centroid=(float(c[0]), float(c[1])))
    else:
        status = Status("max_iter", step=n)
    return TrajectoryResult(samples, status, transient)


# ---------------------------------------------------------------------------
# Lyapunov exponent


def max_lyapunov(p: Params, init, n: int = 100_000, transient: int = DEFAULT_TRANSIENT,
                 allow_escape: bool = False) -> float:
    """Maximal Lyapunov exponent from a unit tangent renormalised every step.

    The tangent starts at ``(1, 1)/sqrt(2)`` once the transient is over.
    Leaving the quadrant raises :class:`EscapeError` unless ``allow_escape``
    is set, in which case iteration continues while the state is finite.
    """
    if not (n > transient >= 0):
        raise DomainError(f"need n > transient >= 0, got n={n}, transient={transient}")
    s0 = _as_state(init)
    mle, code, step = kernels.lyapunov(p.r, p.beta, p.theta, p.gamma, s0.u, s0.v, n,
                                       transient, allow_escape)
    if code == kernels.ESCAPED:
        raise EscapeError(f"orbit left the quadrant at step {step}", step=step)
    if code == kernels.NONFINITE:
        raise EscapeError(f"orbit or tangent became non-finite at step {step}", step=step)
    if code == kernels.UNDERFLOW:
        raise UnderflowError(f"tangent vector collapsed to zero at step {step}")
    return mle


# ---------------------------------------------------------------------------
# bifurcation sweep


@dataclass(frozen=True)
class SweepResult:
    """Per-beta kept samples, limit-set radius about E1 and MLE.

    Rows of ``u``/``v`` belonging to escaped orbits are NaN, ``escape_step``
    is -1 for orbits that stayed in the quadrant. ``radius`` and ``e1`` are
    NaN where no E1 exists. ``mle_code`` uses the kernel status codes.
    """

    beta_grid: np.ndarray
    u: np.ndarray
    v: np.ndarray
    radius: np.ndarray
    mle: np.ndarray
    escape_step: np.ndarray
    mle_code: np.ndarray
    e1: np.ndarray

    @property
    def escaped(self) -> np.ndarray:
        return self.escape_step >= 0


def _e1(p: Params) -> tuple[float, float]:
    try:
        pts = fixed_points.positive_fixed_points(p)
    except ArithmeticError:
        return math.nan, math.nan
    for fp in pts:
        if fp.branch == "E1":
            return fp.u, fp.v
    return math.nan, math.nan


def bifurcation_sweep(r: float, theta: float, gamma: float, betas: Sequence[float],
                      init=(0.1, 0.3), n: int = 10_000, transient: int = DEFAULT_TRANSIENT,
                      keep: int = DEFAULT_KEEP, allow_escape: bool = False,
                      workers: Optional[int] = None) -> SweepResult:
    """Independent trajectories from one initial point for every beta in ``betas``.

    ``workers > 1`` splits the grid into contiguous chunks run on threads;
    the compiled backend releases the GIL so this scales, and the output is
    identical either way.
    """
    grid = np.ascontiguousarray(betas, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("beta grid must be a non-empty 1-d sequence")
    if np.any(np.diff(grid) <= 0.0):
        raise DomainError("beta grid must be strictly increasing")
    if not (0 < keep <= n - transient) or transient < 0:
        raise DomainError(f"need 0 < keep <= n - transient, got keep={keep}, n={n}, transient={transient}")
    Params(r, float(grid[0]), theta, gamma)  # validates r, theta, gamma and the first beta
    s0 = _as_state(init)
    m = grid.size
    out_u = np.empty((m, keep))
    out_v = np.empty((m, keep))
    mle = np.empty(m)
    esc = np.empty(m, dtype=np.int64)
    code = np.empty(m, dtype=np.int64)

    def run(lo: int, hi: int) -> None:
        kernels.sweep(r, theta, gamma, grid[lo:hi], s0.u, s0.v, n, transient, keep, allow_escape,
                      CONV_TOL, CONV_SUSTAIN, out_u[lo:hi], out_v[lo:hi], mle[lo:hi],
                      esc[lo:hi], code[lo:hi])

    nw = 1 if not workers or workers < 2 else min(int(workers), m)
    if nw == 1:
        run(0, m)
    else:
        edges = np.linspace(0, m, nw + 1).astype(int)
        with ThreadPoolExecutor(max_workers=nw) as pool:
            list(pool.map(lambda i: run(edges[i], edges[i + 1]), range(nw)))

    e1 = np.array([_e1(Params(r, float(b), theta, gamma)) for b in grid])
    with np.errstate(invalid="ignore"):
        radius = np.max(np.hypot(out_u - e1[:, :1], out_v - e1[:, 1:]), axis=1)
    return SweepResult(grid, out_u, out_v, radius, mle, esc, code, e1)


# ---------------------------------------------------------------------------
# phase portraits


@dataclass(frozen=True)
class PhasePortrait:
    clouds: list[TrajectoryResult]
    fixed_points: list
    curve: np.ndarray  # (k, 2) samples of v_of_u on (0, 1)


def phase_portrait(p: Params, inits: Sequence, n: int = 10_000,
                   transient: int = DEFAULT_TRANSIENT, curve_points: int = 200) -> PhasePortrait:
    clouds = [trajectory(p, s, n, transient) for s in inits]
    us = np.linspace(0.0, 1.0, curve_points + 2)[1:-1]
    curve = np.column_stack([us, [model.v_of_u(p, float(u)) for u in us]])
    return PhasePortrait(clouds, fixed_points.all_fixed_points(p), curve)


# ---------------------------------------------------------------------------
# convergence to (1, 0)


@dataclass(frozen=True)
class ScanResult:
    """Outcome of iterating every point of an initial lattice to convergence.

    ``targets`` holds ``(1,0)``, ``(0,0)``, ``E1``, ``E2``, ``other`` (a
    converged state not near a fixed point), ``escaped`` or ``max_iter``.
    """

    points: np.ndarray
    targets: list[str]
    steps: np.ndarray
    v_monotone: np.ndarray
    in_M: np.ndarray
    hypotheses: Optional[global_dynamics.Hypotheses] = None
    counterexamples: list[tuple[float, float]] = field(default_factory=list)

    @property
    def fraction(self) -> float:
        return sum(t == "(1,0)" for t in self.targets) / len(self.targets)


RegionSpec = Union[str, global_dynamics.Region]


def lattice(p: Params, region: RegionSpec = "full_M", grid: tuple[int, int] = (50, 50)) -> np.ndarray:
    """Deterministic initial points inside ``region``.

    ``u`` runs over ``bound * i / nu`` for ``i = 1..nu`` (``bound`` is 1 or
    ``x1``); in each column ``v`` takes ``nv`` evenly spaced values from 0 to
    the column's ceiling minus :data:`OMEGA_MARGIN`. The ceiling is
    ``omega(u)``, or ``omega(x1)`` for ``v_below``.
    """
    reg = global_dynamics.Region(region) if isinstance(region, str) else region
    nu, nv = grid
    if nu < 1 or nv < 1:
        raise DomainError("lattice needs at least one point per axis")
    u_top = reg.bound if reg.kind == "u_below" else 1.0
    if reg.kind not in ("full_M", "u_below", "v_below"):
        raise DomainError(f"unknown region kind {reg.kind!r}")
    pts = []
    for i in range(1, nu + 1):
        u = u_top * i / nu
        ceiling = reg.bound if reg.kind == "v_below" else model.omega(p, u)
        top = ceiling - OMEGA_MARGIN
        for j in range(nv):
            v = top * j / (nv - 1) if nv > 1 else 0.0
            pts.append((u, v))
    return np.array(pts)


def _scan(p: Params, pts: np.ndarray, max_iter: int, tol: float, sustain: int,
          hyp=None) -> ScanResult:
    codes, steps, uf, vf, mono, inm = kernels.converge_many(
        p.r, p.beta, p.theta, p.gamma, np.ascontiguousarray(pts[:, 0]),
        np.ascontiguousarray(pts[:, 1]), max_iter, tol, sustain)
    fps = fixed_points.all_fixed_points(p)
    targets = []
    for c, a, b in zip(codes, uf, vf):
        if c == kernels.ESCAPED:
            targets.append("escaped")
        elif c == kernels.MAX_ITER:
            targets.append("max_iter")
        else:
            targets.append(identify(p, float(a), float(b), fps=fps) or "other")
    bad = [(float(u), float(v)) for (u, v), t in zip(pts, targets) if t != "(1,0)"]
    return ScanResult(pts, targets, steps, mono, inm, hyp, bad)


def convergence_scan(p: Params, region: Optional[RegionSpec] = None, grid: tuple[int, int] = (50, 50),
                     max_iter: int = MAX_ITER, tol: float = CONV_TOL, sustain: int = CONV_SUSTAIN,
                     require_hypotheses: bool = True) -> ScanResult:
    """Iterate a lattice of initial points and record where each one ends up.

    With ``region=None`` the region comes from
    :func:`global_dynamics.convergence_hypotheses` (full ``M`` if nothing
    applies and ``require_hypotheses`` is false). Points that do not reach
    ``(1, 0)`` are listed in ``counterexamples``.
    """
    hyp = global_dynamics.convergence_hypotheses(p)
    if require_hypotheses and hyp.applies is None:
        raise NotApplicableError(f"no global-convergence hypothesis holds: {hyp.reason}")
    if region is None:
        region = hyp.regions[0] if hyp.regions else "full_M"
    return _scan(p, lattice(p, region, grid), max_iter, tol, sustain, hyp)


def scan_points(p: Params, points: Sequence, max_iter: int = MAX_ITER, tol: float = CONV_TOL,
                sustain: int = CONV_SUSTAIN) -> ScanResult:
    """Like :func:`convergence_scan` for an explicit list of initial points."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    return _scan(p, pts, max_iter, tol, sustain)


def boundary_lattice(axis: str, count: int = 100) -> np.ndarray:
    """Starts on an invariant axis.

    ``axis="u"``: ``(2k/(count+1), 0)`` for ``k = 1..count``, strictly inside
    ``(0, 2)``; both endpoints map to the origin. ``axis="v"``:
    ``(0, 2k/(count+1))``.
    """
    ks = np.arange(1, count + 1) * (2.0 / (count + 1))
    zeros = np.zeros(count)
    if axis == "u":
        return np.column_stack([ks, zeros])
    if axis == "v":
        return np.column_stack([zeros, ks])
    raise DomainError(f"axis must be 'u' or 'v', got {axis!r}")


__all__ = [
    "Status", "TrajectoryResult", "SweepResult", "PhasePortrait", "ScanResult",
    "trajectory", "max_lyapunov", "bifurcation_sweep", "phase_portrait", "identify",
    "lattice", "convergence_scan", "scan_points", "boundary_lattice",
]
