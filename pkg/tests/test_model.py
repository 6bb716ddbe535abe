import math

import numpy as np
import pytest
from helpers import fd_jacobian
from hypothesis import given, settings
from hypothesis import strategies as st

from plankton_ns import model
from plankton_ns.errors import ConsistencyError, DomainError, EscapeError
from plankton_ns.model import Params, State

positive = st.floats(min_value=1e-3, max_value=50.0, allow_nan=False)
EX1 = Params(0.5, 7.4838, 4.0, 1.0)
EX2 = Params(0.5, 4.734145, 5.0, 0.2)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf, "x"])
def test_params_rejects_bad_values(bad):
    with pytest.raises(DomainError):
        Params(bad, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        Params(1.0, 1.0, 1.0, bad)


def test_state_rejects_silent_negatives_and_nonfinite():
    with pytest.raises(DomainError):
        State(-0.1, 0.2)
    assert State(-0.1, 0.2, escaped=True).u == -0.1
    with pytest.raises(EscapeError):
        State(math.nan, 0.0)


def test_step_examples():
    assert model.step(EX1, State(1.0, 0.0)).as_tuple() == (1.0, 0.0)
    s = model.step(EX1, State(0.6057, 0.8896))
    assert abs(s.u - 0.6057) < 1e-3 and abs(s.v - 0.8896) < 1e-3


@given(r=positive, b=positive, th=positive, g=positive, v=st.floats(0.0, 100.0))
def test_step_on_u_axis(r, b, th, g, v):
    s = model.step(Params(r, b, th, g), State(0.0, v))
    assert s.u == 0.0
    assert s.v == pytest.approx((1 - r) * v, abs=1e-12) or s.escaped


def test_step_flags_escape_and_names_coordinate():
    p = Params(0.5, 1.0, 8.0, 1.0)
    s = model.step(p, State(0.9, 1.0))
    assert s.escaped and s.v < 0
    with pytest.raises(EscapeError) as err:
        model.step(p, State(1e200, 1e200, escaped=True))
    assert err.value.coordinate in ("u", "v")


def test_psi_examples():
    assert model.psi(Params(0.5, 1, 4, 1), 1.0) == pytest.approx(5.0, abs=1e-12)
    p2 = Params(0.5, 1, 5, 0.2)
    assert model.psi(p2, 1.0) == pytest.approx(4.85333, abs=1e-5)
    assert model.psi(p2, 0.5476) == pytest.approx(4.71762, abs=1e-5)
    with pytest.raises(DomainError):
        model.psi(p2, 0.0)


def test_psi_derivative_sign_matches_h():
    p = Params(0.5, 1, 5, 0.2)
    for u in np.linspace(0.05, 0.99, 200):
        fd = (model.psi(p, u + 1e-7) - model.psi(p, u - 1e-7)) / 2e-7
        hv = model.h_poly(p, u)
        if abs(hv) > 1e-6:
            assert np.sign(fd) == np.sign(hv)
        assert model.psi_prime(p, u) == pytest.approx(fd, rel=1e-5)


def test_h_poly_examples():
    p = Params(0.5, 1, 5, 0.2)
    assert model.h_poly(p, 0.0) == pytest.approx(-2 * 0.5 * 0.2 ** 3)
    assert model.h_poly(p, 1.0) == pytest.approx(2.512, abs=1e-12)
    assert abs(model.h_poly(p, 0.5476)) < 1e-3


def test_h_prime_roots():
    p = Params(0.5, 1, 4, 1)
    lo, hi = model.h_prime_roots(p)
    assert lo < 0 < hi
    for u in (lo, hi):
        assert abs(model.h_prime(p, u)) < 1e-12
    from plankton_ns.roots import bisect_newton
    assert bisect_newton(lambda u: model.h_prime(p, u), None, 0.0, 10.0) == pytest.approx(hi, abs=1e-10)
    assert model.h_prime_roots(Params(0.5, 1, 5, 0.2))[1] < 1.0


def test_v_of_u_and_omega():
    assert model.v_of_u(EX1, 1.0) == 0.0
    assert model.v_of_u(Params(0.5, 1, 4, 1.0), 0.6057) == pytest.approx(0.8896, abs=1e-3)
    assert model.v_of_u(Params(0.5, 1, 5, 0.2), 0.6549) == pytest.approx(0.2470, abs=1e-3)
    for g in (0.1, 0.5, 2.0):
        p = Params(0.5, 1, 1, g)
        assert model.omega(p, 1.0) == pytest.approx(g * g + 1)
        assert model.omega(p, 2.0) == 0.0
    p = Params(0.5, 1, 1, 0.5)
    w = [model.omega(p, u) for u in np.linspace(1e-3, 1.0, 1000)]
    assert np.all(np.diff(w) < 0)
    for f in (model.v_of_u, model.omega):
        with pytest.raises(DomainError):
            f(p, 0.0)


def test_jacobian_examples():
    for r in (0.2, 0.5, 1.7):
        J = model.jacobian(Params(r, 3, 2, 0.7), State(0.0, 0.0))
        assert (J.j11, J.j12, J.j21, J.j22) == (2.0, 0.0, 0.0, pytest.approx(1 - r))
    J = model.jacobian(EX1, State(1.0, 0.0))
    assert J.j11 == 0.0 and J.j21 == 0.0
    assert J.j22 == pytest.approx(1 - 0.5 + 7.4838 / 2 - 4 / 2)


@settings(max_examples=60, deadline=None)
@given(r=st.floats(0.05, 2), b=st.floats(0.1, 10), th=st.floats(0.1, 8), g=st.floats(0.1, 2),
       u=st.floats(0.01, 1.0), v=st.floats(0.0, 2.0))
def test_jacobian_matches_finite_differences(r, b, th, g, u, v):
    p = Params(r, b, th, g)
    J = model.jacobian(p, State(u, v)).as_array()
    assert np.max(np.abs(J - fd_jacobian(p, u, v))) < 1e-5 * max(1.0, np.max(np.abs(J)))


def test_jacobian2_accessors_and_eigenvalues():
    J = model.Jacobian2(0.5, -1.0, 1.0, 0.5)
    assert J.trace == 1.0 and J.det == 0.5 * 0.5 + 1.0
    l1, l2 = J.eigenvalues()
    assert l1.imag < 0 < l2.imag and l1 == l2.conjugate()


def test_jacobian_at_fixed_consistency():
    rng = np.random.default_rng(1)
    for _ in range(100):
        p0 = Params(rng.uniform(0.1, 1.5), 1.0, rng.uniform(0.2, 6), rng.uniform(0.1, 2))
        u = rng.uniform(0.05, 0.95)
        p = p0.with_beta(model.psi(p0, u))
        Jf = model.jacobian_at_fixed(p, u)
        Jg = model.jacobian(p, State(u, model.v_of_u(p, u)))
        assert np.max(np.abs(Jf.as_array() - Jg.as_array())) < 1e-8
        assert Jf.j22 == 1.0
        assert Jf.trace == pytest.approx(model.p_of_u(p, u), abs=1e-10)
        assert 1 - Jf.trace + Jf.det == pytest.approx(model.char_poly_at_one(p, u), abs=1e-9)


def test_jacobian_at_fixed_requires_fixed_point():
    with pytest.raises(ConsistencyError):
        model.jacobian_at_fixed(Params(0.5, 7.0, 4, 1), 0.6057)


def test_ex2_eigenvalues_at_fixed():
    J = model.jacobian_at_fixed(Params(0.5, model.psi(EX2, 0.4678072838278), 5, 0.2), 0.4678072838278)
    l1, _ = J.eigenvalues()
    assert abs(l1.real - 0.9499) < 1e-3 and abs(l1.imag + 0.3123) < 1e-3
