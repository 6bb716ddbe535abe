import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plankton_ns.errors import NotFoundError
from plankton_ns.roots import bisect, bisect_newton, cauchy_bound, poly_real_roots, polyval, scan_roots


def test_bisect_bracket_width():
    lo, hi = bisect(lambda x: x * x - 2, 0.0, 2.0)
    assert hi - lo <= 1e-13 and lo <= math.sqrt(2) <= hi


def test_bisect_requires_sign_change():
    with pytest.raises(NotFoundError):
        bisect(lambda x: x * x + 1, -1.0, 1.0)


def test_newton_polish_stays_in_bracket():
    # Newton from the midpoint of a flat-ish cubic jumps far outside; the polish must refuse.
    f = lambda x: math.atan(x - 0.3)  # noqa: E731
    fp = lambda x: 1.0 / (1.0 + (x - 0.3) ** 2)  # noqa: E731
    x = bisect_newton(f, fp, -10.0, 10.0)
    assert abs(x - 0.3) < 1e-13 and -10 <= x <= 10


def test_scan_roots_finds_all_sign_changes():
    roots = scan_roots(math.sin, 0.5, 10.0, 1000)
    assert np.allclose(roots, [math.pi, 2 * math.pi, 3 * math.pi], atol=1e-12)


def test_cauchy_bound_contains_roots():
    c = [2.0, -3.0, -11.0, 6.0]
    b = cauchy_bound(c)
    assert all(abs(z) <= b for z in np.roots(c))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-5, 5).filter(lambda x: abs(x) > 1e-3), min_size=3, max_size=3, unique=True))
def test_poly_real_roots_against_known_roots(rts):
    rts = sorted(rts)
    if min(np.diff(rts)) < 1e-6:
        return
    coeffs = np.poly(rts)
    found = poly_real_roots(coeffs)
    assert len(found) == 3
    assert np.allclose(found, rts, atol=1e-8)
    assert poly_real_roots(coeffs, positive_only=True) == pytest.approx([x for x in found if x > 0])


def test_close_root_pair_is_separated():
    # two roots 1e-4 apart, far below the 1e4-cell scan spacing over the Cauchy interval
    coeffs = np.poly([-170.0, 1.4200, 1.4201])
    found = poly_real_roots(coeffs, positive_only=True)
    assert found == pytest.approx([1.4200, 1.4201], abs=1e-10)


def test_polyval_horner():
    assert polyval([1.0, 0.0, -2.0], 3.0) == 7.0
