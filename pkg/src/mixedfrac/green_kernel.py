"""Green's function of ``X^(2k) = f`` with clamped ends ``X^(j)(0) = X^(j)(1) = 0``.

``G(x, xi) = -S(min(x, xi), max(x, xi)) / (2k-1)!`` where

``S(p, q) = (1-q)**k p**k sum_i sum_j (-1)**i C(2k-1, i) C(k-1+j, j) p**(k-i-1) q**(j+i)``

with ``i = 0..k-1`` and ``j = 0..k-i-1``.  The two branches of the closed form
are ``S(x, xi)`` for ``x <= xi`` and ``S(xi, x)`` for ``xi <= x``.

Two sign conventions are exposed: :func:`green_eval` is the raw ``G``,
:func:`positive_kernel` is ``(-1)**k G`` (a positive definite kernel), and
:func:`kernel_eval` is the weighted symmetric kernel
``xi**(-m/2) (-1)**k G(x, xi) x**(-m/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P


class KernelDomainError(ValueError):
    pass


@dataclass(frozen=True)
class GreenSpec:
    """Half spatial order ``k`` and degeneracy exponent ``m`` (``0 <= m < k``)."""

    k: int
    m: float = 0.0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise KernelDomainError(f"k must be a positive integer, got {self.k!r}")
        if 2 * self.k - 1 > 60:
            raise KernelDomainError(f"k={self.k} too large (2k-1 must be <= 60)")
        m = float(self.m)
        if not (0.0 <= m < self.k):
            raise KernelDomainError(f"m={m!r} must satisfy 0 <= m < k={self.k}")
        if m > 0 and m == math.floor(m):
            raise KernelDomainError(f"m={m!r} must not be a positive integer")


@lru_cache(maxsize=64)
def _branch_coefficients(k):
    """Integer coefficients c[p, q] of the double sum, monomials p**a q**b."""
    c = np.zeros((k, k), dtype=object)
    for i in range(k):
        for j in range(k - i):
            c[k - i - 1, j + i] += (-1) ** i * math.comb(2 * k - 1, i) * math.comb(k - 1 + j, j)
    return c.astype(float), float(math.factorial(2 * k - 1))


def branch_poly(k: int, p, q):
    """``S(p, q)`` for arrays ``p``, ``q`` (no factorial prefactor)."""
    c, _ = _branch_coefficients(k)
    p, q = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
    return (1.0 - q) ** k * p**k * P.polyval2d(p, q, c)


def _check_unit(*arrs):
    for a in arrs:
        a = np.asarray(a)
        if np.any(~np.isfinite(a)) or np.any(a < 0.0) or np.any(a > 1.0):
            raise KernelDomainError("arguments must lie in [0, 1]")


def green_eval(spec: GreenSpec, x, xi):
    """Raw Green's function ``G(x, xi)``; broadcasts over ``x`` and ``xi``."""
    _check_unit(x, xi)
    x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
    _, fact = _branch_coefficients(spec.k)
    out = -branch_poly(spec.k, np.minimum(x, xi), np.maximum(x, xi)) / fact
    return out[()] if out.ndim == 0 else out


def positive_kernel(spec: GreenSpec, x, xi):
    """``(-1)**k G(x, xi)``."""
    return (-1) ** spec.k * green_eval(spec, x, xi)


def kernel_eval(spec: GreenSpec, x, xi):
    """Weighted symmetric kernel; extended by zero on the boundary of the square."""
    _check_unit(x, xi)
    x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
    out = np.zeros(x.shape)
    inside = (x > 0) & (x < 1) & (xi > 0) & (xi < 1)
    if np.any(inside):
        xs, ys = x[inside], xi[inside]
        val = positive_kernel(spec, xs, ys)
        if spec.m:
            val = val * (xs * ys) ** (-0.5 * spec.m)
        out[inside] = val
    return out[()] if out.ndim == 0 else out


def gram_matrix(spec: GreenSpec, nodes, weights):
    """``W^(1/2) K W^(1/2)`` with ``K`` the weighted kernel on the nodes."""
    sw = np.sqrt(np.asarray(weights, dtype=float))
    x = np.asarray(nodes, dtype=float)
    return sw[:, None] * kernel_eval(spec, x[:, None], x[None, :]) * sw[None, :]
