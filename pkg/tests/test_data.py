import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial import polynomial as P
from scipy.integrate import quad

from mixedfrac.data import PolyPhi, PowerSum, admissible_level, iterated_data


def test_poly_family_shape():
    phi = PolyPhi((1.0,), 1)
    x = np.linspace(0, 1, 11)
    np.testing.assert_allclose(phi(x), x * (1 - x), atol=1e-16)
    phi2 = PolyPhi((2.0, -1.0), 2)
    np.testing.assert_allclose(phi2(x), x**2 * (1 - x) ** 2 * (2 - x), atol=1e-15)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6), st.integers(0, 4))
def test_derivative_matches_numpy(coef, order):
    ps = PowerSum.from_poly(coef)
    x = np.linspace(0, 1, 7)
    np.testing.assert_allclose(ps.derivative(order)(x), P.polyval(x, P.polyder(coef, order)), atol=1e-9)


@pytest.mark.parametrize("m", [0.0, 0.5, 1.5])
def test_weighted_integral_against_quad(m):
    f = PowerSum({1.0: 1.0, 2.0: -1.0, 3.5: 0.3})
    ref = quad(lambda x: x**-m * f(x) ** 2, 0, 1, limit=200)[0]
    assert f.weighted_square_integral(m) == pytest.approx(ref, rel=1e-10)


def test_weighted_integral_diverges():
    assert PowerSum({0.0: 1.0}).weighted_square_integral(1.5) == math.inf


def test_vanishing_structure():
    for k in (1, 2, 3):
        ps = PolyPhi((1.0, 2.0, -0.5), k).power_sum()
        assert ps.vanishes_at_ends(k)
        assert not ps.vanishes_at_ends(k + 1)


def test_iterates_second_order():
    # k = 1, m = 0: psi_1 = -f'' = 2 for f = x(1-x), then zero
    psi = iterated_data(PolyPhi((1.0,), 1).power_sum(), 1, 0.0)
    assert psi[1](np.array([0.3]))[0] == pytest.approx(2.0)
    assert psi[2].terms == {} and psi[3].terms == {}


def test_admissible_levels():
    assert admissible_level(PolyPhi((1.0,), 1).power_sum(), 1, 0.0) == 1
    smooth = PolyPhi(tuple(P.polymul([0, 0, 0, 0, 1.0], P.polypow([1, -1], 4))), 1)
    np.testing.assert_allclose(smooth(np.array([0.5])), 0.5**10)
    assert admissible_level(smooth.power_sum(), 1, 0.0) == 3


def test_degenerate_weight_enters():
    # psi_1 = -x**m f'' picks up the weight
    psi = iterated_data(PolyPhi((1.0,), 1).power_sum(), 1, 0.5, levels=1)
    assert psi[1].terms == {0.5: 2.0}
