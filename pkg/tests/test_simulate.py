import numpy as np
import pytest
from helpers import EX1, EX2

from plankton_ns import fixed_points as fp
from plankton_ns import model
from plankton_ns import simulate as sm
from plankton_ns.errors import DomainError, EscapeError, NotApplicableError
from plankton_ns.model import Params


def ex1(beta):
    return Params(EX1["r"], beta, EX1["theta"], EX1["gamma"])


def test_trajectory_converges_to_e1():
    p = ex1(7.46)
    tr = sm.trajectory(p, (0.1, 0.3), 100_000)
    assert tr.status.kind == "converged_to" and tr.status.label == "E1"
    e1 = fp.positive_fixed_points(p)[0]
    assert np.hypot(tr.samples[-1, 0] - e1.u, tr.samples[-1, 1] - e1.v) < 1e-6


def test_trajectory_ex2_goes_to_boundary():
    p = Params(EX2["r"], 4.78, EX2["theta"], EX2["gamma"])
    tr = sm.trajectory(p, (0.45, 0.3), 100_000)
    assert tr.status.kind == "converged_to" and tr.status.label == "(1,0)"


def test_trajectory_from_fixed_point():
    tr = sm.trajectory(ex1(7.4838), (1.0, 0.0), 10)
    assert tr.status.kind == "converged_to" and tr.status.step == 0
    assert np.all(tr.samples == [1.0, 0.0]) and len(tr.samples) == 11


def test_trajectory_layout_and_escape():
    p = ex1(7.0)
    tr = sm.trajectory(p, (0.1, 0.3), 50, transient=10)
    assert tr.first_step == 10 and len(tr.samples) == 41
    full = sm.trajectory(p, (0.1, 0.3), 50)
    assert np.array_equal(full.samples[10:], tr.samples)
    tr = sm.trajectory(p, (1.9, 5.0), 100)
    assert tr.status.kind == "escaped" and tr.status.step == 1
    with pytest.raises(DomainError):
        sm.trajectory(p, (0.1, 0.3), 10, transient=10)


def test_limit_set_status():
    tr = sm.trajectory(ex1(7.6), (0.1, 0.3), 60_000, transient=50_000)
    assert tr.status.kind == "limit_set" and tr.status.radius > 1e-2


def test_sweep_collapse_and_spread():
    betas = [7.0, 7.3, 7.6]
    res = sm.bifurcation_sweep(EX1["r"], EX1["theta"], EX1["gamma"], betas, n=60_000, transient=40_000)
    spread = np.ptp(res.u, axis=1)
    assert spread[0] < 1e-5 and spread[1] < 1e-5 and spread[2] > 1e-2
    assert res.u.shape == (3, sm.DEFAULT_KEEP)
    with pytest.raises(DomainError):
        sm.bifurcation_sweep(EX1["r"], EX1["theta"], EX1["gamma"], [7.0, 7.0])


def test_sweep_keep_one():
    res = sm.bifurcation_sweep(EX1["r"], EX1["theta"], EX1["gamma"], [7.0], n=60_000, transient=1000, keep=1)
    e1 = fp.positive_fixed_points(ex1(7.0))[0]
    assert abs(res.u[0, 0] - e1.u) < 1e-5 and abs(res.v[0, 0] - e1.v) < 1e-5


def test_sweep_deterministic_and_worker_independent():
    betas = np.linspace(6.0, 9.0, 13)
    kw = dict(n=20_000, transient=5000, keep=50)
    a = sm.bifurcation_sweep(EX1["r"], EX1["theta"], EX1["gamma"], betas, **kw)
    b = sm.bifurcation_sweep(EX1["r"], EX1["theta"], EX1["gamma"], betas, workers=4, **kw)
    for name in ("u", "v", "radius", "mle", "escape_step"):
        assert np.array_equal(getattr(a, name), getattr(b, name), equal_nan=True), name


def test_mle_examples():
    assert sm.max_lyapunov(ex1(7.0), (0.1, 0.3)) < 0
    assert abs(sm.max_lyapunov(ex1(8.0), (0.1, 0.3), n=100_000, transient=20_000)) <= 0.02
    with pytest.raises(EscapeError):
        sm.max_lyapunov(ex1(7.0), (1.9, 5.0), n=100, transient=0)


def test_phase_portrait():
    pp = sm.phase_portrait(ex1(7.5), [(0.1, 0.3)], n=10_000, transient=5000)
    cloud = pp.clouds[0].samples
    e1 = fp.positive_fixed_points(ex1(7.5))[0]
    assert e1.u == pytest.approx(0.6044, abs=1e-4)
    ang = np.arctan2(cloud[:, 1] - e1.v, cloud[:, 0] - e1.u)
    assert np.ptp(ang) > 6.0  # the cloud winds around E1
    e1 = fp.positive_fixed_points(ex1(7.0))[0]
    pp = sm.phase_portrait(ex1(7.0), [(e1.u, e1.v)], n=100, transient=10)
    assert np.max(np.abs(pp.clouds[0].samples - [e1.u, e1.v])) < 1e-12


def test_phase_portrait_ex2():
    p = Params(EX2["r"], 4.75, EX2["theta"], EX2["gamma"])
    e1, e2 = fp.positive_fixed_points(p)
    assert e1.u == pytest.approx(0.4413, abs=1e-4)
    assert model.q_of_u(p, e1.u) == pytest.approx(1.0775, abs=1e-4)
    cloud = sm.phase_portrait(p, [(0.7, 0.3)], n=10_000, transient=5000).clouds[0].samples
    ang = np.arctan2(cloud[:, 1] - e1.v, cloud[:, 0] - e1.u)
    assert np.ptp(ang) > 6.0
    rad = np.hypot(cloud[:, 0] - e1.u, cloud[:, 1] - e1.v)
    assert rad.max() < np.hypot(e2.u - e1.u, e2.v - e1.v)


def test_lattice_inside_region():
    p = Params(0.5, 1.4, 1.0, 0.5)
    pts = sm.lattice(p, "full_M", (10, 10))
    assert pts.shape == (100, 2)
    assert np.all(pts[:, 0] > 0) and np.all(pts[:, 0] <= 1)
    assert all(v < model.omega(p, u) for u, v in pts)


def test_scan_prop52():
    p = Params(0.5, 1.4, 1.0, 0.5)
    res = sm.convergence_scan(p, grid=(20, 20))
    assert res.fraction == 1.0 and res.v_monotone.all() and res.in_M.all()
    one = sm.scan_points(p, [(1.0, 0.0)])
    assert one.targets == ["(1,0)"] and one.steps[0] == 0


def test_scan_needs_hypotheses():
    with pytest.raises(NotApplicableError):
        sm.convergence_scan(ex1(7.46), grid=(5, 5))
    res = sm.convergence_scan(ex1(7.46), grid=(10, 10), require_hypotheses=False)
    assert res.fraction < 1.0 and "E1" in res.targets
    assert len(res.counterexamples) == sum(t != "(1,0)" for t in res.targets)


def test_scan_prop54_region():
    p = Params(0.5, 0.5, 0.1, 0.3)
    res = sm.convergence_scan(p, grid=(10, 10))
    assert res.hypotheses.applies == "5.4" and res.fraction == 1.0
    assert np.all(res.points[:, 0] <= res.hypotheses.regions[0].bound)


def test_boundary_lattice():
    u = sm.boundary_lattice("u", 4)
    assert np.allclose(u[:, 0], [0.4, 0.8, 1.2, 1.6]) and np.all(u[:, 1] == 0)
    with pytest.raises(DomainError):
        sm.boundary_lattice("w")
