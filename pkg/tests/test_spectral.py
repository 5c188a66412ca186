import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import bisect

from mixedfrac.green_kernel import GreenSpec
from mixedfrac.spectral import (
    InadmissibleData,
    SpectralError,
    bessel_check,
    build_quadrature,
    compute_basis,
    eigenfunction,
    fourier_coefficient,
    fourier_coefficients,
    green_square_norm,
    mercer_partial_error,
    nystrom_extend,
    nystrom_residuals,
)


def test_quadrature_symmetry():
    q = build_quadrature(8)
    assert len(q.nodes) == 8
    np.testing.assert_allclose(q.nodes + q.nodes[::-1], 1.0, atol=1e-15)
    assert np.all((q.nodes > 0) & (q.nodes < 1))


def test_quadrature_exactness():
    q = build_quadrature(64)
    assert np.sum(q.weights * q.nodes**6) == pytest.approx(1 / 7, abs=1e-14)


@pytest.mark.parametrize("order", [2, 7, 2000])
def test_quadrature_order_bounds(order):
    with pytest.raises(SpectralError):
        build_quadrature(order)


def test_second_order_eigenvalues(basis_k1):
    n = np.arange(1, 11)
    np.testing.assert_allclose(basis_k1.lambdas[:10], (n * np.pi) ** 2, rtol=1e-8)


def test_beam_eigenvalue():
    root = bisect(lambda r: math.cos(r) * math.cosh(r) - 1.0, 4.0, 5.0, xtol=1e-15)
    b = compute_basis(GreenSpec(2), build_quadrature(128), 1)
    assert b.lambdas[0] == pytest.approx(root**4, rel=1e-6)
    assert b.lambdas[0] == pytest.approx(500.5639, abs=1e-4)


@pytest.mark.parametrize("m", [0.3, 0.5])
def test_degenerate_second_order(m):
    # -X'' = lam x**(-m) X: X = sqrt(x) J_nu(2 nu sqrt(lam) x**(1/(2 nu))), nu = 1/(2-m)
    nu = 1 / (2 - m)
    ref = [((2 - m) * float(mp.besseljzero(nu, n)) / 2) ** 2 for n in range(1, 6)]
    b = compute_basis(GreenSpec(1, m), build_quadrature(128), 5)
    np.testing.assert_allclose(b.lambdas, ref, rtol=1e-7)


@pytest.mark.parametrize("k,m", [(1, 0.0), (2, 0.0), (2, 0.5), (3, 1.5)])
def test_positive_and_sorted(k, m):
    b = compute_basis(GreenSpec(k, m), build_quadrature(64), 12)
    assert b.lambdas[0] > 0
    assert np.all(np.diff(b.lambdas) > 0)


def test_weighted_orthonormality():
    b = compute_basis(GreenSpec(2, 0.5), build_quadrature(96), 8)
    w = b.quadrature.weights
    gram = (b.eigvecs * w) @ b.eigvecs.T
    np.testing.assert_allclose(gram, np.eye(8), atol=1e-12)


def test_extension_values(basis_k1):
    assert nystrom_extend(basis_k1, 1, 0.5) == pytest.approx(math.sqrt(2), rel=1e-10)
    x = np.linspace(0, 1, 41)
    for n in (1, 2, 7):
        np.testing.assert_allclose(
            eigenfunction(basis_k1, n, x), math.sqrt(2) * np.sin(n * np.pi * x), atol=1e-9
        )
    assert nystrom_extend(basis_k1, 3, 0.0) == 0.0


def test_extension_consistent_at_nodes(basis_k1):
    x = basis_k1.quadrature.nodes
    np.testing.assert_allclose(nystrom_extend(basis_k1, 2, x), basis_k1.eigvecs[1], atol=1e-10)


def test_nystrom_residual_small(basis_k1):
    assert nystrom_residuals(basis_k1).max() < 1e-8


def test_mode_range(basis_k1):
    with pytest.raises(SpectralError):
        nystrom_extend(basis_k1, 0, 0.5)
    with pytest.raises(SpectralError):
        compute_basis(GreenSpec(1), build_quadrature(16), 17)


def test_fourier_of_eigenfunction(basis_k1):
    phi = lambda x: math.sqrt(2) * np.sin(np.pi * x)
    assert fourier_coefficient(basis_k1, phi, 1) == pytest.approx(1.0, abs=1e-8)
    assert abs(fourier_coefficient(basis_k1, phi, 2)) < 1e-8
    assert np.all(fourier_coefficients(basis_k1, lambda x: 0 * x) == 0)


def test_fourier_of_parabola(basis_k1):
    n = np.arange(1, 21)
    exact = math.sqrt(2) * 2 * (1 - (-1.0) ** n) / (n * np.pi) ** 3
    np.testing.assert_allclose(fourier_coefficients(basis_k1, lambda x: x * (1 - x)), exact, atol=1e-12)


def test_weighted_fourier_against_quad():
    spec = GreenSpec(1, 0.5)
    b = compute_basis(spec, build_quadrature(128), 3)
    phi = lambda x: x * (1 - x)
    got = fourier_coefficients(b, phi)
    for n in range(1, 4):
        ref = quad(lambda s: s**-0.5 * phi(s) * eigenfunction(b, n, s), 0, 1, limit=200)[0]
        assert got[n - 1] == pytest.approx(ref, abs=1e-6)


def test_inadmissible_data(basis_k1):
    with pytest.raises(InadmissibleData):
        fourier_coefficients(basis_k1, lambda x: 1.0 + 0 * x)


def test_bessel_inequality(basis_k1):
    lhs, rhs = bessel_check(basis_k1, 0.5)
    # int_0^1 G(1/2, xi)**2 dxi = 1/48 for k = 1
    assert rhs == pytest.approx(1 / 48, rel=1e-13)
    assert lhs <= rhs
    assert bessel_check(basis_k1, 0.0) == (0.0, 0.0)


def test_bessel_partial_sums_grow():
    q = build_quadrature(64)
    prev = 0.0
    for n in (2, 5, 10, 20):
        lhs, rhs = bessel_check(compute_basis(GreenSpec(1), q, n), 0.3)
        assert prev <= lhs <= rhs
        prev = lhs


@pytest.mark.parametrize("k,m,x", [(2, 0.0, 0.4), (1, 0.5, 0.3), (3, 1.5, 0.7)])
def test_green_square_norm_against_quad(k, m, x):
    from mixedfrac.green_kernel import green_eval

    spec = GreenSpec(k, m)
    f = lambda s: s**-m * green_eval(spec, x, s) ** 2
    ref = quad(f, 0, x, epsabs=1e-16, limit=200)[0] + quad(f, x, 1, epsabs=1e-16, limit=200)[0]
    assert green_square_norm(spec, x) == pytest.approx(ref, rel=1e-10)


def test_mercer_partial_decreases():
    b = compute_basis(GreenSpec(1), build_quadrature(64), 40)
    errs = [mercer_partial_error(b, n) for n in (5, 10, 20, 40)]
    assert all(a > c for a, c in zip(errs, errs[1:]))


@pytest.mark.parametrize("order", [8, 64, 256])
def test_quadrature_weights(order):
    q = build_quadrature(order)
    assert q.weights.sum() == pytest.approx(1.0, abs=1e-13)
    assert np.all(np.diff(q.nodes) > 0)


@pytest.mark.parametrize("k,m", [(1, 0.0), (2, 0.0), (1, 0.5)])
def test_order_doubling(k, m):
    a = compute_basis(GreenSpec(k, m), build_quadrature(64), 8).lambdas
    b = compute_basis(GreenSpec(k, m), build_quadrature(128), 8).lambdas
    assert np.max(np.abs(a / b - 1)) <= 1e-7


def test_fourier_reconstruction_converges():
    from mixedfrac.data import PolyPhi

    q = build_quadrature(64)
    phi = PolyPhi((1.0, 3.0), 2)
    basis = compute_basis(GreenSpec(2), q, 30)
    c = fourier_coefficients(basis, phi)
    errs = []
    for n in (5, 10, 20, 30):
        approx = c[:n] @ basis.eigvecs[:n]
        errs.append(np.max(np.abs(approx - phi(q.nodes))))
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-6
