import numpy as np
import pytest

from plankton_ns import fixed_points as fp
from plankton_ns import model, stability
from plankton_ns.errors import ConsistencyError
from plankton_ns.model import Params
from plankton_ns.stability import CharPoly, Kind, RootLocation, jury_classify


@pytest.mark.parametrize("B,C,tag", [
    (0.0, 0.5, RootLocation.BOTH_INSIDE),
    (0.0, 1.0, RootLocation.ON_UNIT_CIRCLE_COMPLEX),
    (-3.0, 1.0, RootLocation.SADDLE_SPLIT),
    (0.0, 4.0, RootLocation.BOTH_OUTSIDE),
    (-2.0, 1.0, RootLocation.ROOT_AT_PLUS_ONE),
    (2.0, 1.0, RootLocation.DOUBLE_MINUS_ONE),
    (0.5, -0.5, RootLocation.ROOT_AT_MINUS_ONE),
    (3.0, 1.0, RootLocation.ONE_OUTSIDE_OTHER_INSIDE),
    (-5.0, -6.0, RootLocation.ONE_OUTSIDE_OTHER_LEQ_MINUS_ONE),
])
def test_jury_examples(B, C, tag):
    assert jury_classify(CharPoly(B, C)) == tag


def test_saddle_split_roots():
    a, b = sorted(z.real for z in CharPoly(-3.0, 1.0).roots())
    assert a == pytest.approx((3 - 5 ** 0.5) / 2) and b == pytest.approx((3 + 5 ** 0.5) / 2)


def expected_from_moduli(B, C):
    z1, z2 = np.roots([1.0, B, C])
    m = sorted([abs(z1), abs(z2)])
    if m[1] < 1:
        return {RootLocation.BOTH_INSIDE}
    if m[0] > 1:
        # real roots straddling the unit interval land in the F(1) < 0, F(-1) < 0 case
        return {RootLocation.BOTH_OUTSIDE, RootLocation.ONE_OUTSIDE_OTHER_LEQ_MINUS_ONE}
    if m[0] < 1 < m[1]:
        return {RootLocation.SADDLE_SPLIT, RootLocation.ONE_OUTSIDE_OTHER_INSIDE}
    return None


def test_jury_agrees_with_eigenvalues():
    rng = np.random.default_rng(3)
    for B, C in rng.uniform(-4, 4, size=(10_000, 2)):
        cp = CharPoly(B, C)
        # skip the guard band around every case boundary
        if min(abs(cp.at_one), abs(cp.at_minus_one), abs(C - 1)) <= 1e-9:
            continue
        got = jury_classify(cp)
        want = expected_from_moduli(B, C)
        assert want is not None and got in want, (B, C, got)
        if got == RootLocation.SADDLE_SPLIT:
            # F(1) < 0 < F(-1): the outside root exceeds +1
            assert max(z.real for z in np.roots([1, B, C]) if abs(z) > 1) > 1
        if got == RootLocation.ONE_OUTSIDE_OTHER_INSIDE:
            # F(-1) < 0 < F(1): the outside root is below -1
            assert min(z.real for z in np.roots([1, B, C])) < -1
        if got == RootLocation.ONE_OUTSIDE_OTHER_LEQ_MINUS_ONE:
            lo, hi = sorted(z.real for z in np.roots([1, B, C]))
            assert lo < -1 and hi > 1


def test_char_poly_examples():
    p = Params(0.5, 7.46, 4, 1)
    u1 = fp.positive_fixed_points(p)[0].u
    assert u1 == pytest.approx(0.6077, abs=1e-4)
    assert stability.char_poly_at(p, u1).C == pytest.approx(0.9955, abs=1e-4)
    p = Params(0.5, 7.5, 4, 1)
    u1 = fp.positive_fixed_points(p)[0].u
    assert stability.char_poly_at(p, u1).C == pytest.approx(1.003, abs=1e-3)
    with pytest.raises(ConsistencyError):
        stability.char_poly_at(p, 0.5)


def test_factorisation_identity():
    rng = np.random.default_rng(0)
    for _ in range(200):
        p0 = Params(rng.uniform(0.1, 2), 1, rng.uniform(0.1, 8), rng.uniform(0.05, 2))
        u = rng.uniform(0.05, 0.99)
        p = p0.with_beta(model.psi(p0, u))
        assert stability.char_poly_at(p, u).at_one == pytest.approx(model.char_poly_at_one(p, u), abs=1e-10)


@pytest.mark.parametrize("beta,kind", [(7.46, Kind.ATTRACTING), (7.6, Kind.REPELLING)])
def test_e1_kind(beta, kind):
    e1 = fp.positive_fixed_points(Params(0.5, beta, 4, 1))[0]
    assert e1.kind == kind
    if beta == 7.6:
        assert e1.u == pytest.approx(0.5965, abs=1e-4)
        assert model.q_of_u(Params(0.5, beta, 4, 1), e1.u) == pytest.approx(1.0212, abs=1e-4)


def test_kind_from_moduli():
    assert stability.kind_from_moduli(0.5, 0.9) == Kind.ATTRACTING
    assert stability.kind_from_moduli(0.5, 1.5) == Kind.SADDLE
    assert stability.kind_from_moduli(1.0, 1.5) == Kind.NONHYPERBOLIC
