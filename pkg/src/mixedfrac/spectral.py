"""Eigenpairs of the weighted Green's-kernel integral operator.

The eigenproblem ``Xb(x) = lam * int_0^1 K(x, xi) Xb(xi) dxi`` with the weighted
kernel ``K`` from :mod:`green_kernel` is discretised on Gauss-Legendre nodes.
``K`` has a derivative jump on the diagonal, so the plain quadrature matrix
``W^(1/2) K W^(1/2)`` converges only at second order.  Instead the kernel is
replaced by its projection onto polynomials of degree ``< N`` in each
variable; the resulting matrix has the same ``W^(1/2) K_N W^(1/2)`` form, is
symmetric, and the projection integrals are computed by splitting every inner
integral at the diagonal (exact for ``m = 0``).  Off the nodes the
eigenfunctions are extended with the integral equation itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial import legendre
from scipy.special import roots_jacobi

from .green_kernel import GreenSpec, branch_poly, _branch_coefficients

MIN_ORDER, MAX_ORDER = 8, 1024
EIG_CUTOFF = 1e-12
ADMISSIBLE_PROBE = 1e-3
ADMISSIBLE_RATIO = 1e-2


class SpectralError(ValueError):
    pass


class InadmissibleData(SpectralError):
    """Data function fails the endpoint-vanishing screen."""


@dataclass(frozen=True)
class Quadrature:
    nodes: np.ndarray
    weights: np.ndarray
    order: int


def build_quadrature(order: int) -> Quadrature:
    """Gauss-Legendre rule on (0, 1) with ``order`` nodes, ``8 <= order <= 1024``."""
    if int(order) != order or not (MIN_ORDER <= order <= MAX_ORDER):
        raise SpectralError(f"quadrature order {order!r} outside [{MIN_ORDER}, {MAX_ORDER}]")
    order = int(order)
    t, w = legendre.leggauss(order)
    nodes = 0.5 * (t + 1.0)
    weights = 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return Quadrature(nodes, weights, order)


def legendre_basis(x, n: int) -> np.ndarray:
    """Orthonormal shifted Legendre polynomials ``p_0..p_{n-1}`` on [0, 1] at ``x``."""
    x = np.asarray(x, dtype=float)
    v = legendre.legvander(2.0 * x - 1.0, n - 1)
    return v * np.sqrt(2.0 * np.arange(n) + 1.0)


@lru_cache(maxsize=32)
def _jacobi01(npts: int, power: float):
    """Gauss rule on [0, 1] for the weight ``u**power``."""
    if power == 0.0:
        t, w = legendre.leggauss(npts)
        return 0.5 * (t + 1.0), 0.5 * w
    t, w = roots_jacobi(npts, 0.0, power)
    return 0.5 * (t + 1.0), w * 0.5 ** (1.0 + power)


def kernel_moments(spec: GreenSpec, x, nbasis: int, chunk: int = 64) -> np.ndarray:
    """``M[a, s] = int_0^1 K(x_a, xi) p_s(xi) dxi`` for the weighted kernel ``K``.

    Each integral is split at ``xi = x_a``; both pieces are polynomials in
    ``xi`` times ``xi**(-m/2)``, integrated by Gauss-Jacobi rules that are
    exact for them.  The upper piece is written as ``int_0^1 - int_0^x`` so
    that a single rule serves all points.
    """
    k, m = spec.k, float(spec.m)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    half = -0.5 * m
    npts = (nbasis + 2 * k) // 2 + 2
    u, wu = _jacobi01(npts, half)
    sign = (-1) ** k
    fact = _branch_coefficients(k)[1]
    out = np.zeros((x.size, nbasis))
    pu = legendre_basis(u, nbasis)  # for the full-interval piece

    for lo in range(0, x.size, chunk):
        xa = x[lo:lo + chunk]
        inside = (xa > 0.0) & (xa < 1.0)
        if not inside.any():
            continue
        xa = xa[inside]
        # xi = x_a * u on [0, x_a]; weight (x_a u)**(-m/2) -> x_a**(1-m/2) u**(-m/2)
        xi = xa[:, None] * u[None, :]
        scale = xa ** (1.0 + half)
        basis_lo = legendre_basis(xi, nbasis)
        # lower branch: S(xi, x)
        lower = branch_poly(k, xi, xa[:, None])
        # upper branch polynomial S(x, xi), integrated on [0, x] for subtraction
        upper_on_lo = branch_poly(k, xa[:, None], xi)
        upper_full = branch_poly(k, xa[:, None], u[None, :])
        part = np.einsum("ab,b,abs->as", lower - upper_on_lo, wu, basis_lo) * scale[:, None]
        part += np.einsum("ab,b,bs->as", upper_full, wu, pu)
        part *= -sign / fact
        if m:
            part *= xa[:, None] ** half
        out[lo:lo + chunk][inside] = part
    return out


@dataclass(frozen=True)
class EigenBasis:
    """Retained eigenpairs; ``eigvecs[n]`` holds ``Xb_{n+1}`` at the quadrature nodes."""

    spec: GreenSpec
    quadrature: Quadrature
    lambdas: np.ndarray
    eigvecs: np.ndarray
    coeffs: np.ndarray = field(repr=False)  # Legendre coefficients of each mode

    @property
    def count(self) -> int:
        return len(self.lambdas)


def _outer_rule(spec: GreenSpec, n: int):
    if spec.m == 0.0:
        return _jacobi01(n + spec.k + 2, 0.0)
    return _jacobi01(2 * n + 2 * spec.k, -0.5 * spec.m)


def galerkin_matrix(spec: GreenSpec, n: int) -> np.ndarray:
    """``C[r, s] = int int p_r(x) K(x, xi) p_s(xi) dx dxi`` for ``r, s < n``."""
    xo, wo = _outer_rule(spec, n)
    mom = kernel_moments(spec, xo, n)
    if spec.m:
        # the outer rule carries x**(-m/2); undo it on the moments
        mom = mom * xo[:, None] ** (0.5 * spec.m)
    c = (legendre_basis(xo, n) * wo[:, None]).T @ mom
    return 0.5 * (c + c.T)


def compute_basis(spec: GreenSpec, quadrature: Quadrature, count: int) -> EigenBasis:
    """Leading ``count`` eigenpairs, ``lambda`` ascending, weighted-orthonormal."""
    n = quadrature.order
    if not (1 <= count <= n):
        raise SpectralError(f"count={count} must lie in [1, {n}]")
    phi = legendre_basis(quadrature.nodes, n) * np.sqrt(quadrature.weights)[:, None]
    a = phi @ galerkin_matrix(spec, n) @ phi.T
    a = 0.5 * (a + a.T)
    mu, vec = np.linalg.eigh(a)
    order = np.argsort(mu)[::-1]
    mu, vec = mu[order], vec[:, order]
    keep = mu > EIG_CUTOFF * mu[0]
    if keep.sum() < count:
        raise SpectralError(
            f"only {int(keep.sum())} kernel eigenvalues above cutoff, {count} requested"
        )
    mu, vec = mu[:count], vec[:, :count]
    for j in range(count):
        col = vec[:, j]
        first = np.flatnonzero(np.abs(col) > 1e-8 * np.abs(col).max())[0]
        if col[first] < 0:
            vec[:, j] = -col
    eigvecs = (vec / np.sqrt(quadrature.weights)[:, None]).T
    coeffs = (phi.T @ vec).T
    lambdas = 1.0 / mu
    for arr in (lambdas, eigvecs, coeffs):
        arr.setflags(write=False)
    return EigenBasis(spec, quadrature, lambdas, eigvecs, coeffs)


def _check_mode(basis: EigenBasis, mode: int):
    if int(mode) != mode or not (1 <= mode <= basis.count):
        raise SpectralError(f"mode {mode!r} outside 1..{basis.count}")


def nystrom_extend_all(basis: EigenBasis, x) -> np.ndarray:
    """All retained ``Xb_n`` at points ``x``; shape ``(count, len(x))``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    mom = kernel_moments(basis.spec, x, basis.quadrature.order)
    return basis.lambdas[:, None] * (basis.coeffs @ mom.T)


def nystrom_extend(basis: EigenBasis, mode: int, x):
    """``Xb_mode(x) = lam * int K(x, xi) Xb_mode(xi) dxi``; zero at the endpoints."""
    _check_mode(basis, mode)
    xa = np.asarray(x, dtype=float)
    mom = kernel_moments(basis.spec, xa.ravel(), basis.quadrature.order)
    val = basis.lambdas[mode - 1] * (mom @ basis.coeffs[mode - 1])
    return val.reshape(xa.shape)[()] if xa.ndim == 0 else val.reshape(xa.shape)


def eigenfunction(basis: EigenBasis, mode: int, x):
    """Unweighted ``X_n(x) = x**(m/2) Xb_n(x)``."""
    xb = nystrom_extend(basis, mode, x)
    return xb * np.asarray(x, dtype=float) ** (0.5 * basis.spec.m) if basis.spec.m else xb


def nystrom_residuals(basis: EigenBasis) -> np.ndarray:
    """Per mode, max over nodes of ``|Xb_n - lam_n int K Xb_n|``."""
    ext = nystrom_extend_all(basis, basis.quadrature.nodes)
    return np.max(np.abs(ext - basis.eigvecs), axis=1)


def check_admissible(phi: Callable, nodes) -> None:
    """Heuristic endpoint-vanishing screen for data functions.

    ``|phi|`` at ``1e-3`` and ``1 - 1e-3`` must not exceed ``1e-2`` times its
    largest magnitude on the nodes.  Derivative conditions are not checked here.
    """
    vals = np.asarray(phi(np.asarray(nodes, dtype=float)), dtype=float)
    scale = np.max(np.abs(vals))
    if scale == 0.0:
        return
    ends = np.abs(np.asarray(phi(np.array([ADMISSIBLE_PROBE, 1.0 - ADMISSIBLE_PROBE])), dtype=float))
    if np.any(ends > ADMISSIBLE_RATIO * scale):
        raise InadmissibleData(
            f"data does not vanish at the ends: |phi| = {ends.max():.3e} vs max {scale:.3e}"
        )


def fourier_coefficients(basis: EigenBasis, phi: Callable, check: bool = True) -> np.ndarray:
    """``phi_n = int x**(-m) phi X_n dx`` for all retained modes."""
    x, w = basis.quadrature.nodes, basis.quadrature.weights
    if check:
        check_admissible(phi, x)
    vals = np.asarray(phi(x), dtype=float) * np.ones_like(x)
    if not np.all(np.isfinite(vals)):
        raise SpectralError("phi is not finite at a quadrature node")
    if basis.spec.m:
        vals = vals * x ** (-0.5 * basis.spec.m)
    return basis.eigvecs @ (w * vals)


def fourier_coefficient(basis: EigenBasis, phi: Callable, mode: int, check: bool = True) -> float:
    _check_mode(basis, mode)
    return float(fourier_coefficients(basis, phi, check)[mode - 1])


def green_square_norm(spec: GreenSpec, x: float, npts: int = 96) -> float:
    """``int_0^1 xi**(-m) G(x, xi)**2 dxi``."""
    k, m = spec.k, float(spec.m)
    if not 0.0 < x < 1.0:
        return 0.0
    fact = _branch_coefficients(k)[1]
    # lower branch: G**2 = xi**(2k) * (S(xi, x) / xi**k)**2 / fact**2
    u, wu = _jacobi01(npts, 2.0 * k - m)
    xi = x * u
    q = branch_poly(k, xi, x) / np.where(xi > 0, xi, 1.0) ** k
    lower = x ** (2.0 * k - m + 1.0) * np.sum(wu * q**2)
    # upper branch on [x, 1]
    if m == 0.0:
        t, wt = _jacobi01(npts, 0.0)
        xi = x + (1.0 - x) * t
        upper = (1.0 - x) * np.sum(wt * branch_poly(k, x, xi) ** 2)
    else:
        # xi = x**(1-t): smooth in t for any power of xi
        t, wt = _jacobi01(npts, 0.0)
        lx = -math.log(x)
        xi = x ** (1.0 - t)
        upper = lx * np.sum(wt * xi ** (1.0 - m) * branch_poly(k, x, xi) ** 2)
    return float((lower + upper) / fact**2)


def bessel_check(basis: EigenBasis, x: float) -> tuple[float, float]:
    """``(sum_n (X_n(x)/lam_n)**2, int xi**(-m) G(x, xi)**2 dxi)``."""
    if not 0.0 <= x <= 1.0:
        raise SpectralError(f"x={x!r} outside [0, 1]")
    xs = np.array([x])
    xb = nystrom_extend_all(basis, xs)[:, 0]
    xn = xb * x ** (0.5 * basis.spec.m) if basis.spec.m else xb
    lhs = float(np.sum((xn / basis.lambdas) ** 2))
    return lhs, green_square_norm(basis.spec, x)


def mercer_partial_error(basis: EigenBasis, nmodes: int) -> float:
    """Max over node pairs of ``|K - sum_{n<=N} Xb_n Xb_n / lam_n|``."""
    from .green_kernel import kernel_eval

    x = basis.quadrature.nodes
    k = kernel_eval(basis.spec, x[:, None], x[None, :])
    v = basis.eigvecs[:nmodes]
    approx = (v.T / basis.lambdas[:nmodes]) @ v
    return float(np.max(np.abs(k - approx)))
