"""Per-mode problem in ``y``: fractional relaxation above the interface,
fractional oscillation below it, glued by the conjugation conditions and
closed by the nonlocal condition ``Y(b) - Y(-a) = phi_n``.

For ``y > 0``: ``Y = c1 E_{alpha,1}(-lam y**alpha)``.
For ``y < 0``, with ``s = -y``: ``Y = c2 E_{beta,1}(-lam s**beta) + c3 s E_{beta,2}(-lam s**beta)``.

Below the interface the order-``beta`` Caputo derivative acts on the reflected
variable ``s``; that is the convention under which both branches solve
``D Y = -lam Y``.  Matching gives ``c2 = c1``, ``c3 = lam c1`` and
``c1 = phi_n / Delta(lam)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .gamma import gamma
from .mittag_leffler import ml_eval, ml_eval_array, ml_largest_real_zero

MIN_CAPUTO_STEPS = 64
SEPARATION_EPSILON = 0.1


class TemporalError(ValueError):
    pass


class Status(str, Enum):
    REGULAR = "regular"
    RESONANT_SOLVABLE = "resonant-solvable"
    RESONANT_UNSOLVABLE = "resonant-unsolvable"


@dataclass(frozen=True)
class TemporalConfig:
    alpha: float
    beta: float
    a: float
    b: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise TemporalError(f"alpha={self.alpha!r} outside (0, 1)")
        if not 1.0 < self.beta < 2.0:
            raise TemporalError(f"beta={self.beta!r} outside (1, 2)")
        if not (self.a > 0.0 and self.b > 0.0 and math.isfinite(self.a) and math.isfinite(self.b)):
            raise TemporalError(f"extents a={self.a!r}, b={self.b!r} must be positive")


@dataclass(frozen=True)
class ModeSolution:
    lam: float
    phi_n: float
    delta_n: float
    c1: float
    c2: float
    c3: float
    status: Status


def delta_n(lam: float, cfg: TemporalConfig) -> float:
    """``E_{a,1}(-lam b**a) - E_{b,1}(-lam a**b) - a lam E_{b,2}(-lam a**b)``
    (``a``/``b`` subscripts being ``alpha``/``beta``)."""
    if not lam > 0:
        raise TemporalError(f"lambda must be positive, got {lam!r}")
    t_up = lam * cfg.b**cfg.alpha
    t_lo = lam * cfg.a**cfg.beta
    return (
        ml_eval(cfg.alpha, 1.0, -t_up)
        - ml_eval(cfg.beta, 1.0, -t_lo)
        - cfg.a * lam * ml_eval(cfg.beta, 2.0, -t_lo)
    )


def delta_limit(cfg: TemporalConfig) -> float:
    """Limit of ``Delta`` as ``lam -> oo``: ``-1 / (a**(beta-1) Gamma(2-beta))``."""
    return -1.0 / (cfg.a ** (cfg.beta - 1.0) * gamma(2.0 - cfg.beta))


def resonance_tolerance(cfg: TemporalConfig) -> float:
    return 1e-10 * (1.0 + abs(delta_limit(cfg)))


def solve_mode(
    lam: float,
    phi_n: float,
    cfg: TemporalConfig,
    tol: float | None = None,
    *,
    phi_tol: float = 1e-12,
    delta: float | None = None,
) -> ModeSolution:
    """Coefficients of mode ``lam`` with data ``phi_n``.

    ``tol`` is the resonance threshold on ``|Delta|`` (default
    :func:`resonance_tolerance`); ``phi_tol`` decides whether the data of a
    resonant mode counts as zero.  ``delta`` overrides the computed ``Delta``.
    """
    if tol is None:
        tol = resonance_tolerance(cfg)
    d = delta_n(lam, cfg) if delta is None else float(delta)
    if abs(d) > tol:
        c1 = phi_n / d
        return ModeSolution(lam, phi_n, d, c1, c1, lam * c1, Status.REGULAR)
    status = Status.RESONANT_SOLVABLE if abs(phi_n) <= phi_tol else Status.RESONANT_UNSOLVABLE
    return ModeSolution(lam, phi_n, d, 0.0, 0.0, 0.0, status)


def _upper(sol, cfg, y):
    return sol.c1 * ml_eval_array(cfg.alpha, 1.0, -sol.lam * y**cfg.alpha)


def _lower(sol, cfg, s):
    arg = -sol.lam * s**cfg.beta
    return sol.c2 * ml_eval_array(cfg.beta, 1.0, arg) + sol.c3 * s * ml_eval_array(cfg.beta, 2.0, arg)


def _lower_slope(sol, cfg, s):
    """``dY/ds`` below the interface (``s = -y``)."""
    arg = -sol.lam * s**cfg.beta
    with np.errstate(divide="ignore", invalid="ignore"):
        first = np.where(s > 0, s ** (cfg.beta - 1.0), 0.0) * ml_eval_array(cfg.beta, cfg.beta, arg)
    return -sol.lam * sol.c2 * first + sol.c3 * ml_eval_array(cfg.beta, 1.0, arg)


def y_eval(sol: ModeSolution, cfg: TemporalConfig, y):
    """Mode profile ``Y(y)`` on ``[-a, b]``.  ``+0.0`` and ``-0.0`` select the
    upper and lower branch; both give ``c1``."""
    ya = np.asarray(y, dtype=float)
    if np.any(ya < -cfg.a * (1 + 1e-12)) or np.any(ya > cfg.b * (1 + 1e-12)):
        raise TemporalError("y outside [-a, b]")
    flat = ya.ravel()
    out = np.empty_like(flat)
    up = (flat > 0) | ((flat == 0) & ~np.signbit(flat))
    if up.any():
        out[up] = _upper(sol, cfg, flat[up])
    if (~up).any():
        out[~up] = _lower(sol, cfg, -flat[~up])
    out = out.reshape(ya.shape)
    return float(out) if out.ndim == 0 else out


def flux_above(sol: ModeSolution) -> float:
    """Order-alpha Caputo derivative of ``Y`` at ``+0``: ``-lam c1``."""
    return -sol.lam * sol.c1


def slope_below(sol: ModeSolution) -> float:
    """``Y'(-0)`` in ``y``: the ``s E_{beta,2}`` term contributes ``-c3``, the
    ``E_{beta,1}`` term is ``O(s**(beta-1))``."""
    return -sol.c3


def graded_mesh(y: float, steps: int, grading: float) -> np.ndarray:
    """``0 = z_0 < ... < z_steps = y`` clustered at 0 as ``(j/steps)**grading``."""
    return y * (np.arange(steps + 1) / steps) ** grading


def l1_caputo(values: np.ndarray, mesh: np.ndarray, order: float) -> float:
    """L1 product-integration approximation of the Caputo derivative of order
    ``0 < order < 1`` at ``mesh[-1]`` from samples on ``mesh``."""
    y = mesh[-1]
    h = np.diff(mesh)
    dist = y - mesh[:-1]
    e = 1.0 - order
    with np.errstate(divide="ignore"):
        # (y - z_j)**e - (y - z_{j+1})**e without cancellation
        w = -(dist**e) * np.expm1(e * np.log1p(-h / dist))
    slopes = np.diff(values) / h
    return float(np.sum(slopes * w) / gamma(2.0 - order))


def caputo_of_mode(sol: ModeSolution, cfg: TemporalConfig, y: float, steps: int = 4096) -> float:
    """Numerical Caputo derivative of ``Y`` at ``y != 0``.

    Above the interface: L1 scheme of order ``alpha`` on ``Y``.  Below: the
    order-``beta`` derivative in ``s = -y`` is the order-``(beta-1)`` Caputo
    derivative of the analytic ``dY/ds``, again by L1.  Meshes are graded
    towards the interface with exponents ``2/alpha`` and ``2/(beta-1)``.
    For an exact solution the result is ``-lam Y(y)``.
    """
    if steps < MIN_CAPUTO_STEPS:
        raise TemporalError(f"steps={steps} below {MIN_CAPUTO_STEPS}")
    if y == 0:
        raise TemporalError("Caputo oracle needs y != 0")
    if y > 0:
        mesh = graded_mesh(y, steps, 2.0 / cfg.alpha)
        return l1_caputo(_upper(sol, cfg, mesh), mesh, cfg.alpha)
    g = cfg.beta - 1.0
    mesh = graded_mesh(-y, steps, 2.0 / g)
    return l1_caputo(_lower_slope(sol, cfg, mesh), mesh, g)


@dataclass(frozen=True)
class UniquenessEntry:
    mode: int
    delta_n: float
    status: str  # "ok" or "violating"


@dataclass(frozen=True)
class UniquenessReport:
    entries: list[UniquenessEntry]
    limit: float
    separation: float  # |limit| - eps with eps = SEPARATION_EPSILON * |limit|
    largest_zero: float | None  # largest positive zero of E_{beta,2}(-t) found
    first_above_zero: int | None  # first mode with lam a**beta > largest zero
    separated_from: int | None  # first N with |Delta(n)| >= separation for all n >= N
    tolerance: float

    def __iter__(self):
        return iter((e.mode, e.delta_n, e.status) for e in self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def violating(self) -> list[int]:
        return [e.mode for e in self.entries if e.status != "ok"]


def uniqueness_report(basis, cfg: TemporalConfig, tol: float | None = None) -> UniquenessReport:
    """Evaluate ``Delta`` on every retained mode and flag ``|Delta| < tol``.

    ``basis`` is an ``EigenBasis`` or a plain sequence of eigenvalues.
    """
    lambdas = np.asarray(getattr(basis, "lambdas", basis), dtype=float)
    if tol is None:
        tol = resonance_tolerance(cfg)
    limit = delta_limit(cfg)
    sep = (1.0 - SEPARATION_EPSILON) * abs(limit)
    entries = []
    for n, lam in enumerate(lambdas, start=1):
        d = delta_n(float(lam), cfg)
        entries.append(UniquenessEntry(n, float(d), "ok" if abs(d) >= tol else "violating"))
    cert = ml_largest_real_zero(cfg.beta, 2.0)
    h = cert.largest_zero_h
    first_above = None
    for n, lam in enumerate(lambdas, start=1):
        if lam * cfg.a**cfg.beta > (h or 0.0):
            first_above = n
            break
    separated = None
    for n in range(len(entries), 0, -1):
        if abs(entries[n - 1].delta_n) >= sep:
            separated = n
        else:
            break
    return UniquenessReport(entries, limit, sep, h, first_above, separated, tol)
