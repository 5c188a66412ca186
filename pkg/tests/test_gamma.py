import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from mixedfrac.gamma import gamma, rgamma, rgamma_array


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 1.5, 2.5, 7.3, 33.3, 120.5, 170.2])
def test_gamma_matches_mpmath(x):
    ref = float(mp.gamma(x))
    assert gamma(x) == pytest.approx(ref, rel=2e-13)


@pytest.mark.parametrize("x", [-0.5, -1.5, -2.7, -10.3])
def test_reflection_branch(x):
    assert gamma(x) == pytest.approx(math.gamma(x), rel=1e-12)


def test_half_integer():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)


@pytest.mark.parametrize("n", [0, -1, -2, -7])
def test_rgamma_vanishes_at_poles(n):
    assert rgamma(n) == 0.0


def test_rgamma_array_matches_scalar():
    x = np.array([-3.0, -2.5, 0.0, 0.3, 1.0, 4.2, 60.0])
    np.testing.assert_allclose(rgamma_array(x), [rgamma(v) for v in x], rtol=1e-14, atol=0)


@given(st.floats(min_value=0.05, max_value=150.0))
def test_functional_equation(x):
    assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-12)
