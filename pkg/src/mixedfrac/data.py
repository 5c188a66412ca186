"""Data functions ``phi`` for the nonlocal condition.

``PolyPhi`` is the built-in family ``x**k (1-x)**k * sum_i c_i x**i``; its
first ``k-1`` derivatives vanish at both ends by construction.
``EigenmodePhi`` stands for a computed eigenfunction ``X_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P


class PowerSum:
    """Finite sum ``sum c_e x**e`` with real exponents ``e``; exact calculus."""

    def __init__(self, terms=None):
        self.terms = {float(e): float(c) for e, c in (terms or {}).items() if c != 0.0}

    @classmethod
    def from_poly(cls, coef):
        return cls({i: c for i, c in enumerate(coef)})

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for e, c in self.terms.items():
            out = out + c * x**e
        return out

    def __mul__(self, other):
        if isinstance(other, PowerSum):
            acc = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    acc[e1 + e2] = acc.get(e1 + e2, 0.0) + c1 * c2
            return PowerSum(acc)
        return PowerSum({e: c * other for e, c in self.terms.items()})

    __rmul__ = __mul__

    def shift(self, power):
        """Multiply by ``x**power``."""
        return PowerSum({e + power: c for e, c in self.terms.items()})

    def derivative(self, order=1):
        out = dict(self.terms)
        for _ in range(order):
            nxt = {}
            for e, c in out.items():
                if e != 0.0:
                    nxt[e - 1.0] = nxt.get(e - 1.0, 0.0) + c * e
            out = nxt
        return PowerSum(out)

    def scale(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def value_at_zero(self):
        if any(e < 0 for e in self.terms):
            return math.inf
        return self.terms.get(0.0, 0.0)

    def value_at_one(self):
        return math.fsum(self.terms.values())

    def vanishes_at_ends(self, k, rtol=1e-10):
        """True when derivatives of order ``0..k-1`` vanish at 0 and 1."""
        tol = rtol * max(self.scale(), 1e-300)
        for i in range(k):
            d = self.derivative(i)
            if abs(d.value_at_zero()) > tol or abs(d.value_at_one()) > tol:
                return False
        return True

    def weighted_square_integral(self, m):
        """``int_0^1 x**(-m) f(x)**2 dx``, ``inf`` if divergent at 0."""
        acc = []
        for e1, c1 in self.terms.items():
            for e2, c2 in self.terms.items():
                p = e1 + e2 - m
                if p <= -1.0:
                    return math.inf
                acc.append(c1 * c2 / (p + 1.0))
        return math.fsum(acc)


def iterated_data(f: PowerSum, k: int, m: float, levels: int = 3) -> list[PowerSum]:
    """``psi_0 = f``, ``psi_{j+1} = (-1)**k x**m psi_j^(2k)``.

    With ``phi_n = int x**(-m) phi X_n dx`` one has ``phi_n = (psi_p)_n / lam_n**p``
    as long as ``psi_0 .. psi_{p-1}`` vanish with their first ``k-1``
    derivatives at both ends.
    """
    out = [f]
    for _ in range(levels):
        out.append((-1) ** k * out[-1].derivative(2 * k).shift(m))
    return out


def admissible_level(f: PowerSum, k: int, m: float, levels: int = 3) -> int:
    """Largest ``p <= levels`` for which the integration by parts above holds."""
    psi = iterated_data(f, k, m, levels)
    p = 0
    while p < levels and psi[p].vanishes_at_ends(k):
        p += 1
    return p


@dataclass(frozen=True)
class PolyPhi:
    """``phi(x) = x**k (1-x)**k * sum_i coefficients[i] x**i``."""

    coefficients: tuple[float, ...]
    k: int

    def polynomial(self) -> np.ndarray:
        base = P.polypow([0.0, 1.0, -1.0], self.k)  # (x - x**2)**k
        return P.polymul(base, np.asarray(self.coefficients, dtype=float))

    def power_sum(self) -> PowerSum:
        return PowerSum.from_poly(self.polynomial())

    def __call__(self, x):
        return P.polyval(np.asarray(x, dtype=float), self.polynomial())


@dataclass(frozen=True)
class EigenmodePhi:
    """The ``index``-th computed eigenfunction (1-based)."""

    index: int


@dataclass(frozen=True)
class FunctionPhi:
    """Arbitrary vectorised callable; no closed-form derivatives."""

    func: Callable

    def __call__(self, x):
        return self.func(x)
