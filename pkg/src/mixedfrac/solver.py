"""Truncated series solution ``u = sum_n X_n(x) Y_n(y)`` on a grid, and its
verification against the equation and the side conditions.

The interface ``y = 0`` appears twice in every grid: once as ``+0.0`` (upper
branch) and once as ``-0.0`` (lower branch), so value continuity across the
interface is a comparison of two stored rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .data import EigenmodePhi, PolyPhi, admissible_level, iterated_data
from .green_kernel import GreenSpec
from .mittag_leffler import envelope_constant
from .spectral import (
    MAX_ORDER,
    MIN_ORDER,
    EigenBasis,
    bessel_check,
    build_quadrature,
    compute_basis,
    fourier_coefficients,
    nystrom_extend_all,
)
from .temporal import (
    ModeSolution,
    Status,
    TemporalConfig,
    caputo_of_mode,
    delta_n,
    flux_above,
    resonance_tolerance,
    slope_below,
    solve_mode,
    uniqueness_report,
    y_eval,
)

BESSEL_POINTS = np.linspace(0.05, 0.95, 10)
FD_STEP = 1e-3
PDE_ROWS_PER_SIDE = 4


class SolverError(ValueError):
    pass


class UnsolvableInstance(SolverError):
    """Some mode has ``Delta = 0`` and nonzero data."""

    def __init__(self, modes):
        self.modes = list(modes)
        super().__init__(f"resonant modes with nonzero data: {self.modes}")


@dataclass(frozen=True)
class ProblemConfig:
    spec: GreenSpec
    temporal: TemporalConfig
    phi: object  # PolyPhi, EigenmodePhi, FunctionPhi or a plain callable
    modes: int = 20
    quad_order: int = 128
    grid: tuple[int, int] = (33, 33)
    resonance_tol: float | None = None
    phi_tol: float = 1e-12

    def __post_init__(self):
        if not MIN_ORDER <= self.quad_order <= MAX_ORDER:
            raise SolverError(f"quad_order={self.quad_order} outside [{MIN_ORDER}, {MAX_ORDER}]")
        if not 1 <= self.modes <= self.quad_order:
            raise SolverError(f"modes={self.modes} must lie in [1, quad_order={self.quad_order}]")
        nx, ny = self.grid
        if nx < 2 or ny < 2:
            raise SolverError(f"grid {self.grid} needs at least 2 points per direction")
        if isinstance(self.phi, EigenmodePhi) and not 1 <= self.phi.index <= self.modes:
            raise SolverError(f"eigenmode index {self.phi.index} outside 1..{self.modes}")
        if isinstance(self.phi, PolyPhi) and self.phi.k != self.spec.k:
            raise SolverError("poly data built for a different k")

    @property
    def tolerance(self) -> float:
        if self.resonance_tol is None:
            return resonance_tolerance(self.temporal)
        return self.resonance_tol


@dataclass
class SolutionField:
    config: ProblemConfig
    basis: EigenBasis
    x: np.ndarray  # (nx,)
    y: np.ndarray  # (2 ny,), lower rows first, ending with -0.0, then +0.0 ...
    branch: list  # per (row, column): "+", "-" or "boundary"
    values: np.ndarray  # (2 ny, nx)
    modes: list  # ModeSolution per retained mode
    xmodes: np.ndarray = field(repr=False)  # X_n(x), (N, nx)
    ymodes: np.ndarray = field(repr=False)  # Y_n(y), (N, 2 ny)

    @property
    def modes_used(self) -> int:
        return len(self.modes)

    @property
    def diagnostics(self) -> list[tuple[float, float, float]]:
        return [(s.lam, s.phi_n, s.delta_n) for s in self.modes]

    def row(self, y: float) -> np.ndarray:
        """Row of ``values`` at ``y``; ``+0.0`` and ``-0.0`` are distinct."""
        neg = math.copysign(1.0, y) < 0
        hit = np.flatnonzero((self.y == y) & (np.signbit(self.y) == neg))
        if hit.size == 0:
            raise SolverError(f"y={y!r} is not a grid row")
        return self.values[hit[0]]


def y_rows(temporal: TemporalConfig, ny: int) -> np.ndarray:
    lower = np.linspace(-temporal.a, 0.0, ny)
    lower[-1] = -0.0
    upper = np.linspace(0.0, temporal.b, ny)
    upper[0] = 0.0
    return np.concatenate([lower, upper])


def _weighted(basis: EigenBasis, x: np.ndarray) -> np.ndarray:
    """``X_n(x) = x**(m/2) Xb_n(x)`` for all modes, shape ``(N, len(x))``."""
    xb = nystrom_extend_all(basis, x)
    return xb * x ** (0.5 * basis.spec.m) if basis.spec.m else xb


def phi_callable(config: ProblemConfig, basis: EigenBasis) -> Callable:
    phi = config.phi
    if isinstance(phi, EigenmodePhi):
        j = phi.index
        return lambda x: _weighted(basis, np.atleast_1d(np.asarray(x, dtype=float)))[j - 1]
    return phi


def data_coefficients(config: ProblemConfig, basis: EigenBasis) -> np.ndarray:
    phi = config.phi
    if isinstance(phi, EigenmodePhi):
        q = basis.quadrature
        return basis.eigvecs @ (q.weights * basis.eigvecs[phi.index - 1])
    if isinstance(phi, PolyPhi):
        return fourier_coefficients(basis, phi, check=False)
    return fourier_coefficients(basis, phi, check=True)


def make_basis(config: ProblemConfig) -> EigenBasis:
    return compute_basis(config.spec, build_quadrature(config.quad_order), config.modes)


def solve_modes(config: ProblemConfig, basis: EigenBasis, delta_fn=None) -> list[ModeSolution]:
    """Per-mode coefficients.  ``delta_fn(lam, cfg)`` replaces ``Delta``."""
    delta_fn = delta_fn or delta_n
    coef = data_coefficients(config, basis)
    tol = config.tolerance
    out = []
    for lam, p in zip(basis.lambdas, coef):
        d = delta_fn(float(lam), config.temporal)
        out.append(
            solve_mode(float(lam), float(p), config.temporal, tol, phi_tol=config.phi_tol, delta=d)
        )
    return out


def assemble(config: ProblemConfig, *, basis: EigenBasis | None = None, delta_fn=None) -> SolutionField:
    """Evaluate the truncated series on the configured grid."""
    basis = basis or make_basis(config)
    sols = solve_modes(config, basis, delta_fn)
    bad = [n for n, s in enumerate(sols, start=1) if s.status is Status.RESONANT_UNSOLVABLE]
    if bad:
        raise UnsolvableInstance(bad)
    nx, ny = config.grid
    x = np.linspace(0.0, 1.0, nx)
    y = y_rows(config.temporal, ny)
    xm = _weighted(basis, x)
    ym = np.array([y_eval(s, config.temporal, y) for s in sols])
    values = ym.T @ xm
    # exact zeros on the boundary columns: X_n(0) = X_n(1) = 0
    values[:, 0] = 0.0
    values[:, -1] = 0.0
    branch = [
        ["boundary" if i in (0, nx - 1) else ("-" if np.signbit(yy) else "+") for i in range(nx)]
        for yy in y
    ]
    return SolutionField(config, basis, x, y, branch, values, sols, xm, ym)


# {{{ verification

@dataclass(frozen=True)
class DecayReport:
    values: np.ndarray  # |lam_n**3 phi_n|
    partial_sums: np.ndarray  # cumulative sums of values**2
    level: int | None  # levels of integration by parts justified by the data
    bound: float | None  # int x**(-m) psi_3**2 dx, closed-form data only

    @property
    def bounded(self) -> bool | None:
        if self.bound is None:
            return None
        return bool(self.partial_sums[-1] <= self.bound * (1.0 + 1e-9) + 1e-300)


def coefficient_decay(config: ProblemConfig, basis: EigenBasis, coef=None) -> DecayReport:
    """``|lam_n**3 phi_n|`` and its square-sum bound when ``phi`` is polynomial."""
    if coef is None:
        coef = data_coefficients(config, basis)
    vals = np.abs(basis.lambdas**3 * np.asarray(coef))
    sums = np.cumsum(vals**2)
    level = bound = None
    if isinstance(config.phi, PolyPhi):
        k, m = config.spec.k, float(config.spec.m)
        f = config.phi.power_sum()
        level = admissible_level(f, k, m)
        bound = iterated_data(f, k, m)[3].weighted_square_integral(m)
    return DecayReport(vals, sums, level, bound)


@dataclass(frozen=True)
class VerificationReport:
    pde_residual_sup: float
    pde_scale: float  # sup of |sum lam_n X_n Y_n| at the same points
    pde_fd_residual_sup: float | None  # k = 1 finite-difference cross-check
    conjugation_value_gap: float
    conjugation_flux_gap: float
    nonlocal_gap_sup: float
    mode_closure_gap: float
    boundary_gap: float
    bessel_ok: bool
    bessel_margin: float  # min over points of rhs - lhs
    coefficient_decay: np.ndarray
    decay_partial_sums: np.ndarray
    decay_level: int | None
    decay_bound: float | None
    decay_bounded: bool | None
    series_tail_lhs: float
    series_tail_rhs: float
    uniqueness: object = field(repr=False)

    @property
    def series_bound_ok(self) -> bool:
        return self.series_tail_lhs <= self.series_tail_rhs

    def gaps(self) -> dict[str, float]:
        return {
            "pde_residual_sup": self.pde_residual_sup,
            "conjugation_value_gap": self.conjugation_value_gap,
            "conjugation_flux_gap": self.conjugation_flux_gap,
            "nonlocal_gap_sup": self.nonlocal_gap_sup,
            "mode_closure_gap": self.mode_closure_gap,
            "boundary_gap": self.boundary_gap,
        }


def _sample_rows(y: np.ndarray, count: int) -> np.ndarray:
    """Indices of up to ``count`` nonzero rows on each side of the interface."""
    idx = []
    for side in (y < 0, y > 0):
        rows = np.flatnonzero(side)
        if rows.size:
            pick = np.unique(np.linspace(0, rows.size - 1, min(count, rows.size)).round().astype(int))
            idx.extend(rows[pick])
    return np.array(sorted(idx), dtype=int)


def _caputo_table(field_: SolutionField, rows, steps) -> np.ndarray:
    cfg = field_.config.temporal
    return np.array(
        [[caputo_of_mode(s, cfg, float(field_.y[r]), steps) for r in rows] for s in field_.modes]
    )


def _fd_crosscheck(field_: SolutionField, caputo: np.ndarray, rows) -> float:
    """``|D u - x**m u_xx|`` with ``u_xx`` from central differences."""
    basis = field_.basis
    m = float(basis.spec.m)
    xs = np.array([0.25, 0.5, 0.75])
    pick = rows[np.unique(np.linspace(0, len(rows) - 1, 3).round().astype(int))]
    sel = np.searchsorted(rows, pick)
    h = FD_STEP
    xm = _weighted(basis, np.concatenate([xs - h, xs, xs + h])).reshape(-1, 3, len(xs))
    d2 = (xm[:, 0] - 2.0 * xm[:, 1] + xm[:, 2]) / h**2  # (N, 3)
    ym = field_.ymodes[:, pick]  # (N, 3)
    uxx = d2.T @ ym  # (x, y)
    du = xm[:, 1].T @ caputo[:, sel]
    return float(np.max(np.abs(du - xs[:, None] ** m * uxx)))


def verify(field_: SolutionField, config: ProblemConfig, steps: int = 4096) -> VerificationReport:
    """Residuals of the equation and of every side condition on ``field_``."""
    if field_.config != config:
        raise SolverError("field was assembled from a different configuration")
    cfg = config.temporal
    basis = field_.basis
    sols = field_.modes
    lam = basis.lambdas
    x, y = field_.x, field_.y
    xm, ym = field_.xmodes, field_.ymodes
    interior = slice(1, len(x) - 1)

    # equation: D u + (-1)**k x**m d^{2k}u/dx^{2k} = sum_n X_n (D Y_n + lam_n Y_n)
    rows = _sample_rows(y, PDE_ROWS_PER_SIDE)
    cap = _caputo_table(field_, rows, steps)  # (N, rows)
    mode_res = cap + lam[:, None] * ym[:, rows]
    xi = xm[:, interior]
    pde = np.abs(xi.T @ mode_res)
    scale = np.abs(xi.T @ (lam[:, None] * ym[:, rows]))
    pde_sup = float(pde.max()) if pde.size else 0.0
    scale_sup = float(scale.max()) if scale.size else 0.0
    fd = _fd_crosscheck(field_, cap, rows) if config.spec.k == 1 and len(rows) else None

    below = np.flatnonzero((y == 0) & np.signbit(y))[0]
    above = np.flatnonzero((y == 0) & ~np.signbit(y))[0]
    value_gap = float(np.max(np.abs(field_.values[above] - field_.values[below])))
    f_up = np.array([flux_above(s) for s in sols])
    f_dn = np.array([slope_below(s) for s in sols])
    flux_gap = float(np.max(np.abs(f_up @ xm - f_dn @ xm)))

    phi = phi_callable(config, basis)
    phix = np.asarray(phi(x), dtype=float) * np.ones_like(x)
    nonlocal_gap = float(np.max(np.abs(field_.values[-1] - field_.values[0] - phix)))
    closure = [
        abs(ym[n, -1] - ym[n, 0] - s.phi_n) for n, s in enumerate(sols) if s.status is Status.REGULAR
    ]
    closure_gap = float(max(closure, default=0.0))
    boundary_gap = float(np.max(np.abs(np.concatenate([xm[:, 0] @ ym, xm[:, -1] @ ym]))))

    margins = []
    for p in BESSEL_POINTS:
        lhs, rhs = bessel_check(basis, float(p))
        margins.append(rhs * (1.0 + 1e-9) - lhs)
    margin = float(min(margins))

    coef = np.array([s.phi_n for s in sols])
    decay = coefficient_decay(config, basis, coef)
    tail_lhs, tail_rhs = series_tail_bound(field_, coef)

    return VerificationReport(
        pde_residual_sup=pde_sup,
        pde_scale=scale_sup,
        pde_fd_residual_sup=fd,
        conjugation_value_gap=value_gap,
        conjugation_flux_gap=flux_gap,
        nonlocal_gap_sup=nonlocal_gap,
        mode_closure_gap=closure_gap,
        boundary_gap=boundary_gap,
        bessel_ok=margin >= 0.0,
        bessel_margin=margin,
        coefficient_decay=decay.values,
        decay_partial_sums=decay.partial_sums,
        decay_level=decay.level,
        decay_bound=decay.bound,
        decay_bounded=decay.bounded,
        series_tail_lhs=tail_lhs,
        series_tail_rhs=tail_rhs,
        uniqueness=uniqueness_report(basis, cfg, config.tolerance),
    )


def series_tail_bound(field_: SolutionField, coef) -> tuple[float, float]:
    """Tail ``n > N/2`` of ``sum lam_n X_n Y_n`` against its Cauchy-Schwarz bound.

    Per mode ``|Y_n(y)| <= |phi_n / Delta_n| g_n(y)`` with ``g_n`` built from the
    Mittag-Leffler envelope constants, so the tail is bounded by
    ``G / min|Delta| * sqrt(sum (X_n/lam_n)**2) * sqrt(sum (lam_n**3 phi_n)**2)``
    with ``G = max_n g_n / lam_n``.
    """
    cfg = field_.config.temporal
    lam = field_.basis.lambdas
    n0 = len(lam) // 2
    if n0 == len(lam):
        return 0.0, 0.0
    sl = slice(n0, None)
    lt = lam[sl]
    dmin = min(abs(s.delta_n) for s in field_.modes[n0:])
    if dmin == 0.0:
        return 0.0, math.inf
    m_up = envelope_constant(cfg.alpha, 1.0)
    m_b1 = envelope_constant(cfg.beta, 1.0)
    m_b2 = envelope_constant(cfg.beta, 2.0)
    # lam s / (1 + lam s**beta) <= lam * a on [0, a]
    g = np.maximum(m_up, m_b1 + m_b2 * lt * cfg.a)
    big_g = float(np.max(g / lt))
    xm = field_.xmodes[sl]
    tail = np.abs((lt[:, None] * field_.ymodes[sl]).T @ xm)
    lhs = float(tail.max())
    xs = np.sqrt(np.max(np.sum((xm / lt[:, None]) ** 2, axis=0)))
    cs = np.sqrt(np.sum((lt**3 * np.asarray(coef)[sl]) ** 2))
    return lhs, big_g / dmin * xs * cs

# }}}
