"""Lanczos approximation of the gamma function on the real line."""

from __future__ import annotations

import math

import numpy as np

# g = 7, n = 9 (Numerical Recipes / Godfrey coefficients)
_G = 7.0
_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def _lanczos_positive(x: float) -> float:
    # valid for x >= 0.5
    x -= 1.0
    acc = _COEF[0]
    for i in range(1, len(_COEF)):
        acc += _COEF[i] / (x + i)
    t = x + _G + 0.5
    # split the power to postpone overflow for x up to ~171
    half = t ** (0.5 * (x + 0.5))
    return _SQRT_2PI * half * (half * math.exp(-t)) * acc


def gamma(x: float) -> float:
    """Gamma function for real ``x``.

    Uses the reflection formula below 1/2. Raises ``ValueError`` at the poles
    and ``OverflowError`` past the double range.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"gamma: non-finite argument {x!r}")
    if _is_nonpositive_integer(x):
        raise ValueError(f"gamma: pole at {x!r}")
    if x < 0.5:
        s = math.sin(math.pi * x)
        return math.pi / (s * _lanczos_positive(1.0 - x))
    if x > 171.6:
        raise OverflowError(f"gamma: overflow at {x!r}")
    return _lanczos_positive(x)


def rgamma(x: float) -> float:
    """Reciprocal gamma function, an entire function (zero at the poles of gamma)."""
    x = float(x)
    if _is_nonpositive_integer(x):
        return 0.0
    if x < 0.5:
        # 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
        if 1.0 - x > 171.6:
            raise OverflowError(f"rgamma: overflow at {x!r}")
        return math.sin(math.pi * x) * _lanczos_positive(1.0 - x) / math.pi
    if x > 171.6:
        return 0.0
    return 1.0 / _lanczos_positive(x)


def rgamma_array(x) -> np.ndarray:
    """Vectorised :func:`rgamma`."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for i, xi in np.ndenumerate(x):
        out[i] = rgamma(xi)
    return out
