"""Two-parameter Mittag-Leffler function on the real line.

``E_{mu,eta}(z) = sum_n z**n / Gamma(mu*n + eta)`` for ``0 < mu <= 2`` and
``eta > 0``.  Two regimes are used:

* the Taylor series, summed in extended precision (mpmath) with the working
  precision raised by ``|z|**(1/mu) / ln 10`` digits, which is the size of the
  largest term relative to the result;
* for ``z <= -crossover(mu)`` the asymptotic expansion: the residues of the
  two conjugate poles ``zeta = t**(1/mu) exp(+-i pi/mu)`` (present for
  ``mu >= 1``) plus the optimally truncated inverse-power series
  ``sum_k (-1)**(k+1) t**-k / Gamma(eta - mu k)``.

The crossover is a rule, ``|z|**(1/mu) = SERIES_WINDOW``: there the dropped
remainder of the inverse-power series is of order ``exp(-SERIES_WINDOW)``
relative to the leading term, and the series needs about 36 digits.

:func:`ml_eval` is the scalar reference.  :func:`ml_eval_array` is the
vectorised path used by the solver; between the small-argument series and the
asymptotic regime it interpolates piecewise Chebyshev tables built once per
``(mu, eta)`` from :func:`ml_eval`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .gamma import gamma, rgamma

SERIES_WINDOW = 36.0
# below this value of |z|**(1/mu) plain double-precision summation is safe
_FLOAT_SERIES_WINDOW = 2.0
_TABLE_PANEL = 1.0
_TABLE_DEGREE = 20
_EPS = 1e-17


class MittagLefflerError(ValueError):
    """Invalid Mittag-Leffler query (parameter or argument out of domain)."""


class EnvelopeViolation(AssertionError):
    """Raised when a computed value escapes the ``M / (1 + |z|)`` envelope."""


@dataclass(frozen=True)
class MLQuery:
    mu: float
    eta: float
    z: float

    def __post_init__(self):
        _check_params(self.mu, self.eta)
        if not math.isfinite(self.z):
            raise MittagLefflerError(f"non-finite argument z={self.z!r}")


@dataclass(frozen=True)
class ZeroCertificate:
    """Outcome of a sign-change scan of ``E_{beta,eta}(-t)`` on ``(0, scan_bound]``.

    ``largest_zero_h`` is ``None`` when no sign change was seen; ``bracket`` is
    then ``None`` as well.
    """

    beta: float
    eta: float
    largest_zero_h: float | None
    bracket: tuple[float, float] | None
    zero_count_scanned: int
    scan_bound: float

    @property
    def has_zero(self) -> bool:
        return self.largest_zero_h is not None


def _check_params(mu, eta):
    if not (math.isfinite(mu) and 0.0 < mu <= 2.0):
        raise MittagLefflerError(f"order mu={mu!r} outside (0, 2]")
    if not (math.isfinite(eta) and eta > 0.0):
        raise MittagLefflerError(f"eta={eta!r} must be positive")


def crossover(mu: float) -> float:
    """``|z|`` above which negative arguments use the asymptotic expansion."""
    return SERIES_WINDOW**mu


# {{{ scalar reference


@lru_cache(maxsize=256)
def _mp_rgammas(mu, eta, nterms, dps):
    with mpmath.workdps(dps):
        m, e = mpmath.mpf(mu), mpmath.mpf(eta)
        return tuple(mpmath.rgamma(m * n + e) for n in range(nterms))


@lru_cache(maxsize=4096)
def _rgamma(x):
    """Correctly rounded ``1/Gamma(x)``."""
    return float(mpmath.rgamma(x))


def _series_nterms(mu, eta, r, tol_log):
    # smallest N past the peak with r**N / Gamma(mu N + eta) < exp(tol_log)
    if r == 0.0:
        return 1
    lr = math.log(r)
    n = 1
    while True:
        x = mu * n + eta
        lt = n * lr - math.lgamma(x)
        # term ratio < 1 once r < (mu n)**mu, roughly
        if lt < tol_log and (n * lr - math.lgamma(mu * (n + 1) + eta)) < lt:
            return n + 1
        n += 1


def _series_mp(mu, eta, z):
    r = abs(z)
    scale = r ** (1.0 / mu) if r > 0 else 0.0
    dps = 24 + int(scale / math.log(10.0))
    # the sum is at least ~1/|z| on the negative axis; target 1e-20 relative
    tol_log = -(dps - 2) * math.log(10.0) + (scale if z > 0 else 0.0)
    nterms = _series_nterms(mu, eta, r, tol_log)
    # round up so the cache is shared between nearby arguments
    nterms = 32 * (nterms // 32 + 1)
    dps = 8 * (dps // 8 + 1)
    coef = _mp_rgammas(mu, eta, nterms, dps)
    with mpmath.workdps(dps):
        zz = mpmath.mpf(z)
        acc = mpmath.mpf(0)
        for c in reversed(coef):
            acc = acc * zz + c
        return float(acc)


def _pole_part(mu, eta, t):
    """Residue contribution of the conjugate poles, zero for mu < 1."""
    if mu < 1.0:
        return 0.0
    if mu == 1.0:
        return t ** (1.0 - eta) * math.cos(math.pi * (1.0 - eta)) * math.exp(-t)
    s = t ** (1.0 / mu)
    zeta = s * complex(math.cos(math.pi / mu), math.sin(math.pi / mu))
    if zeta.real < -745.0:
        return 0.0
    val = zeta ** (1.0 - eta) * np.exp(zeta)
    return (2.0 / mu) * val.real


def _algebraic_part(mu, eta, t):
    lt = math.log(t)
    total = 0.0
    prev_env = math.inf
    for k in range(1, 100000):
        # |1/Gamma(eta - mu k)| <= Gamma(1 + mu k - eta) / pi for eta - mu k < 1
        x = mu * k - eta + 1.0
        env = (math.exp(math.lgamma(x) - k * lt) / math.pi) if x > 0 else t**-k
        if env > prev_env:
            break
        total += (-1.0) ** (k + 1) * _rgamma(eta - mu * k) * t**-k
        if env < _EPS * abs(total):
            break
        prev_env = env
    return total


def _asymptotic(mu, eta, t):
    return _pole_part(mu, eta, t) + _algebraic_part(mu, eta, t)


def ml_eval(mu: float, eta: float, z: float) -> float:
    """Evaluate ``E_{mu,eta}(z)`` for real ``z``.

    Raises :class:`MittagLefflerError` for parameters outside ``0 < mu <= 2``,
    ``eta > 0`` or a non-finite ``z``, and ``OverflowError`` when the value
    does not fit a double.
    """
    q = MLQuery(float(mu), float(eta), float(z))
    if q.z == 0.0:
        return _rgamma(q.eta)
    if q.z <= -crossover(q.mu):
        return _asymptotic(q.mu, q.eta, -q.z)
    if q.z > 0 and q.z ** (1.0 / q.mu) > 720.0:
        # grows like exp(z**(1/mu)) / mu
        raise OverflowError(f"E_({q.mu},{q.eta})({q.z}) overflows")
    val = _series_mp(q.mu, q.eta, q.z)
    if not math.isfinite(val):
        raise OverflowError(f"E_({q.mu},{q.eta})({q.z}) overflows")
    return val


# }}}

# {{{ vectorised evaluation


class _Table:
    """Per-(mu, eta) data for the vectorised evaluator."""

    def __init__(self, mu, eta):
        self.mu, self.eta = mu, eta

        # small-argument series in doubles
        tmax = _FLOAT_SERIES_WINDOW**mu
        n = _series_nterms(mu, eta, tmax, math.log(_EPS))
        self.series_coef = np.array([_rgamma(mu * k + eta) for k in range(n)])

        # Chebyshev panels in s = t**(1/mu) on [_FLOAT_SERIES_WINDOW, SERIES_WINDOW]
        npanel = int(math.ceil((SERIES_WINDOW - _FLOAT_SERIES_WINDOW) / _TABLE_PANEL))
        self.s0 = _FLOAT_SERIES_WINDOW
        self.width = (SERIES_WINDOW - _FLOAT_SERIES_WINDOW) / npanel
        nodes = np.cos(np.pi * (np.arange(_TABLE_DEGREE + 1) + 0.5) / (_TABLE_DEGREE + 1))
        coefs = np.empty((npanel, _TABLE_DEGREE + 1))
        for p in range(npanel):
            lo = self.s0 + p * self.width
            s = lo + 0.5 * (nodes + 1.0) * self.width
            vals = [ml_eval(mu, eta, -(si**mu)) for si in s]
            coefs[p] = np.polynomial.chebyshev.chebfit(nodes, vals, _TABLE_DEGREE)
        self.cheb = coefs

        # inverse-power coefficients (-1)**(k+1) / Gamma(eta - mu k)
        kmax = int(SERIES_WINDOW / mu) + 8
        ks = np.arange(1, kmax + 1)
        self.asym_coef = np.array([(-1.0) ** (k + 1) * _rgamma(eta - mu * k) for k in ks])
        x = mu * ks - eta + 1.0
        self.asym_lenv = np.array(
            [math.lgamma(xi) - math.log(math.pi) if xi > 0 else 0.0 for xi in x]
        )

    def series(self, z):
        acc = np.zeros_like(z)
        for c in self.series_coef[::-1]:
            acc = acc * z + c
        return acc

    def interp(self, s):
        p = np.clip(((s - self.s0) / self.width).astype(int), 0, self.cheb.shape[0] - 1)
        x = 2.0 * (s - (self.s0 + p * self.width)) / self.width - 1.0
        c = self.cheb[p]
        # Clenshaw, vectorised over points
        b1 = np.zeros_like(s)
        b2 = np.zeros_like(s)
        for j in range(c.shape[1] - 1, 0, -1):
            b1, b2 = 2.0 * x * b1 - b2 + c[:, j], b1
        return x * b1 - b2 + c[:, 0]

    def asymptotic(self, t):
        mu, eta = self.mu, self.eta
        lt = np.log(t)
        out = np.zeros_like(t)
        prev = np.full_like(t, np.inf)
        active = np.ones(t.shape, dtype=bool)
        lead = np.abs(self.asym_coef[0]) / t
        for k, (c, lenv) in enumerate(zip(self.asym_coef, self.asym_lenv), start=1):
            env = np.exp(lenv - k * lt)
            active &= env <= prev
            out = np.where(active, out + c * t ** (-k), out)
            active &= env >= _EPS * np.maximum(np.abs(out), lead)
            prev = env
            if not active.any():
                break
        if mu == 1.0:
            out += t ** (1.0 - eta) * math.cos(math.pi * (1.0 - eta)) * np.exp(-t)
        elif mu > 1.0:
            s = t ** (1.0 / mu)
            zeta = s * np.exp(1j * math.pi / mu)
            with np.errstate(under="ignore"):
                out += (2.0 / mu) * (zeta ** (1.0 - eta) * np.exp(zeta)).real
        return out


@lru_cache(maxsize=64)
def _table(mu, eta):
    return _Table(mu, eta)


def ml_eval_array(mu: float, eta: float, z) -> np.ndarray:
    """Vectorised ``E_{mu,eta}(z)``; agrees with :func:`ml_eval` to ~1e-13."""
    mu, eta = float(mu), float(eta)
    _check_params(mu, eta)
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise MittagLefflerError("non-finite argument")
    tab = _table(mu, eta)
    out = np.empty_like(z)
    flat, res = z.ravel(), out.ravel()

    pos = flat > 0.0
    for i in np.flatnonzero(pos):
        res[i] = ml_eval(mu, eta, flat[i])
    t = -flat
    s = np.where(pos, 0.0, np.abs(t)) ** (1.0 / mu)
    small = ~pos & (s <= _FLOAT_SERIES_WINDOW)
    mid = ~pos & (s > _FLOAT_SERIES_WINDOW) & (t < crossover(mu))
    large = ~pos & (t >= crossover(mu))
    if small.any():
        res[small] = tab.series(flat[small])
    if mid.any():
        res[mid] = tab.interp(s[mid])
    if large.any():
        res[large] = tab.asymptotic(t[large])
    return out


# }}}

# {{{ envelope and zeros

_ENVELOPE_Z = -np.concatenate([[0.0], np.logspace(-3, 6, 400)])
_ENVELOPE_MARGIN = 1.05


@lru_cache(maxsize=256)
def envelope_constant(mu: float, eta: float) -> float:
    """``M`` with ``|E_{mu,eta}(-t)| <= M / (1 + t)`` sampled on ``t in [0, 1e6]``.

    The sampled maximum is inflated by a 5% margin.
    """
    vals = ml_eval_array(mu, eta, _ENVELOPE_Z)
    return _ENVELOPE_MARGIN * float(np.max(np.abs(vals) * (1.0 - _ENVELOPE_Z)))


_CAL_MU = (0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.7, 1.9)
_CAL_ETA = (0.5, 1.0, 1.5, 2.0)


@lru_cache(maxsize=1)
def calibrated_envelope() -> float:
    """Single envelope constant over the calibration grid of ``(mu, eta)``."""
    return max(envelope_constant(m, e) for m in _CAL_MU for e in _CAL_ETA)


def ml_eval_bounded(mu: float, eta: float, z: float) -> float:
    """:func:`ml_eval` for ``z <= 0`` with an envelope self-check."""
    if z > 0:
        raise MittagLefflerError(f"ml_eval_bounded needs z <= 0, got {z!r}")
    val = ml_eval(mu, eta, z)
    m = envelope_constant(float(mu), float(eta))
    if abs(val) * (1.0 + abs(z)) > m:
        raise EnvelopeViolation(
            f"|E_({mu},{eta})({z})| = {abs(val):.3e} exceeds {m:.3e}/(1+|z|)"
        )
    return val


def default_scan_bound(beta: float, eta: float = 2.0) -> float:
    """Upper end of the zero scan for ``E_{beta,eta}(-t)``.

    Real zeros come from the oscillating pole term.  Past the point where its
    amplitude ``(2/beta) s**(1-eta) exp(s cos(pi/beta))`` (``s = t**(1/beta)``)
    falls below the leading inverse-power term, the sign is fixed.  The bound
    is twice that crossover in ``t``.
    """
    if beta <= 1.0:
        return 50.0
    c = math.cos(math.pi / beta)
    k = 1
    while rgamma(eta - beta * k) == 0.0:
        k += 1
    inv = abs(rgamma(eta - beta * k))

    def dominance(s):
        osc = (2.0 / beta) * s ** (1.0 - eta) * math.exp(s * c)
        return osc - inv * s ** (-beta * k)

    s = 1.0
    while dominance(s) > 0 or s < 2.0:
        s *= 1.1
        if s > 1e4:
            break
    return max(50.0, 2.0 * s**beta)


def ml_largest_real_zero(
    beta: float,
    eta: float = 2.0,
    scan_bound: float | None = None,
    step: float = 0.01,
) -> ZeroCertificate:
    """Largest ``t > 0`` with ``E_{beta,eta}(-t) = 0`` inside ``(0, scan_bound]``.

    Sign changes are located on a uniform grid of spacing ``step`` and the
    largest one is refined by bisection to 1e-10 absolute.
    """
    _check_params(beta, eta)
    if scan_bound is None:
        scan_bound = default_scan_bound(beta, eta)
    if not scan_bound > 0:
        raise MittagLefflerError(f"scan_bound must be positive, got {scan_bound!r}")
    t = np.arange(1, int(math.floor(scan_bound / step)) + 1) * step
    vals = ml_eval_array(beta, eta, -t)
    sign = np.sign(vals)
    flips = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    exact = np.flatnonzero(vals == 0.0)
    count = len(flips) + len(exact)
    if count == 0:
        return ZeroCertificate(beta, eta, None, None, 0, float(scan_bound))

    last_flip = t[flips[-1]] if len(flips) else -1.0
    if len(exact) and t[exact[-1]] >= last_flip:
        h = float(t[exact[-1]])
        return ZeroCertificate(beta, eta, h, (h, h), count, float(scan_bound))
    i = flips[-1]
    lo, hi = float(t[i]), float(t[i + 1])
    flo = ml_eval(beta, eta, -lo)
    bracket = (lo, hi)
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        fm = ml_eval(beta, eta, -mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return ZeroCertificate(beta, eta, 0.5 * (lo + hi), bracket, count, float(scan_bound))


# }}}


def asymptotic_leading(mu: float, eta: float, t: float) -> float:
    """First inverse-power term ``1 / (t Gamma(eta - mu))`` of ``E_{mu,eta}(-t)``."""
    return rgamma(eta - mu) / t


__all__ = [
    "SERIES_WINDOW",
    "EnvelopeViolation",
    "MLQuery",
    "MittagLefflerError",
    "ZeroCertificate",
    "asymptotic_leading",
    "calibrated_envelope",
    "crossover",
    "default_scan_bound",
    "envelope_constant",
    "gamma",
    "ml_eval",
    "ml_eval_array",
    "ml_eval_bounded",
    "ml_largest_real_zero",
]
