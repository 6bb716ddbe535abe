import numpy as np
import pytest

from plankton_ns import fixed_points as fp
from plankton_ns import model
from plankton_ns.model import Params
from plankton_ns.roots import cauchy_bound, scan_roots
from plankton_ns.stability import Kind


def test_u_hat_examples():
    p = Params(0.5, 1, 5, 0.2)
    uh = fp.u_hat(p)
    assert uh == pytest.approx(0.5476, abs=5e-4)
    assert abs(model.h_poly(p, uh)) < 1e-10 and model.h_prime(p, uh) > 0
    assert model.h_poly(p, uh - 1e-6) < 0 < model.h_poly(p, uh + 1e-6)
    p1 = Params(0.5, 1, 4, 1)
    coeffs = model.h_coefficients(p1)
    scanned = [x for x in scan_roots(lambda u: model.h_poly(p1, u), 0.0, cauchy_bound(coeffs), 10_000) if x > 0]
    assert len(scanned) == 1 and fp.u_hat(p1) == pytest.approx(scanned[0], abs=1e-12)


@pytest.mark.parametrize("r,g,th,tag", [
    (0.5, 1.0, 4.0, "R2"), (0.5, 0.2, 5.0, "R5"), (0.5, 0.8, 1.0, "R2"),
    (0.5, 0.5, 0.5, "R1"), (0.5, 0.5, 5.0, "R4"), (0.5, 0.2, 0.1, "R1"), (0.5, 0.2, 0.3, "R3"),
])
def test_classify_region(r, g, th, tag):
    assert fp.classify_region(Params(r, 1.0, th, g)).tag == tag


def test_region_records_only_compared_thresholds():
    lab = fp.classify_region(Params(0.5, 1.0, 4.0, 1.0))
    assert lab.theta_low is None and lab.theta_high is None
    lab = fp.classify_region(Params(0.5, 1.0, 5.0, 0.2))
    assert lab.theta_low is not None and lab.theta_high == pytest.approx(0.5142857, abs=1e-6)


def test_theta_high_tie_goes_to_r3():
    r, g = 0.5, 0.25  # exactly representable inputs
    th = fp.theta_high(r, g)
    assert fp.classify_region(Params(r, 1.0, th, g)).tag == "R3"


def test_positive_fixed_points_examples():
    pts = fp.positive_fixed_points(Params(0.5, 7.4838, 4, 1))
    assert len(pts) == 1 and pts[0].u == pytest.approx(0.6057, abs=5e-4)
    assert fp.positive_fixed_points(Params(0.5, 4.0, 5, 0.2)) == []
    pts = fp.positive_fixed_points(Params(0.5, 4.75, 5, 0.2))
    assert [x.branch for x in pts] == ["E1", "E2"]
    assert pts[1].kind == Kind.SADDLE


def test_tangency_returns_single_flagged_point():
    p0 = Params(0.5, 1.0, 5.0, 0.2)
    uh = fp.u_hat(p0)
    pts = fp.positive_fixed_points(p0.with_beta(model.psi(p0, uh)))
    assert len(pts) == 1 and pts[0].tangent and pts[0].kind == Kind.NONHYPERBOLIC
    assert pts[0].u == pytest.approx(uh)


def _draw(rng):
    return Params(rng.uniform(0.05, 2), rng.uniform(0.1, 12), rng.uniform(0.05, 10), rng.uniform(0.02, 1.2))


def test_count_matches_theorem_and_invariants():
    rng = np.random.default_rng(11)
    for _ in range(500):
        p = _draw(rng)
        pts = fp.positive_fixed_points(p)
        assert len(pts) == fp.predicted_count(p), p
        uh = fp.u_hat(p)
        for x in pts:
            assert x.residual < 1e-9
            assert abs(model.psi(p, x.u) - p.beta) / p.beta < 1e-11
            assert x.u < uh if x.branch == "E1" else x.u > uh
        if len(pts) == 2:
            assert pts[0].u < uh < pts[1].u
            assert model.psi(p, uh) < p.beta < model.psi(p, 1.0)


def test_boundary_classification():
    assert fp.boundary_classification(Params(0.5, 7.4838, 4, 1)) == (Kind.SADDLE, Kind.SADDLE)
    assert fp.boundary_eigenvalue(Params(0.5, 7.4838, 4, 1)) == pytest.approx(2.2419, abs=1e-4)
    assert fp.origin_kind(Params(2.0, 1, 1, 1)) == Kind.NONHYPERBOLIC
    assert fp.origin_kind(Params(2.5, 1, 1, 1)) == Kind.REPELLING
    # (1, 0) is nonhyperbolic exactly where lambda_2 = 1, i.e. theta = (beta/(1+g^2) - r)(1+g)
    r, b, g = 0.5, 4.0, 1.0
    th = (b / (1 + g * g) - r) * (1 + g)
    assert fp.boundary_kind(Params(r, b, th, g)) == Kind.NONHYPERBOLIC
    assert fp.boundary_kind(Params(0.5, 1.4, 1, 0.5)) == Kind.ATTRACTING


def test_all_fixed_points_order():
    pts = fp.all_fixed_points(Params(0.5, 4.75, 5, 0.2))
    assert [x.branch for x in pts] == ["origin", "boundary", "E1", "E2"]
