import math

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from mixedfrac.data import EigenmodePhi, FunctionPhi, PolyPhi
from mixedfrac.green_kernel import GreenSpec
from mixedfrac.solver import (
    ProblemConfig,
    SolverError,
    UnsolvableInstance,
    assemble,
    coefficient_decay,
    make_basis,
    verify,
)
from mixedfrac.spectral import InadmissibleData
from mixedfrac.temporal import TemporalConfig, delta_n, y_eval

REF = TemporalConfig(0.5, 1.5, 1.0, 1.0)
SMOOTH = PolyPhi(tuple(P.polymul([0, 0, 0, 0, 1.0], P.polypow([1, -1], 4))), 1)  # x^5 (1-x)^5


def config(phi, modes=20, spec=GreenSpec(1), grid=(17, 9), **kw):
    return ProblemConfig(spec, REF, phi, modes, 128, grid, **kw)


def test_config_validation():
    with pytest.raises(SolverError):
        config(PolyPhi((1.0,), 1), modes=200)
    with pytest.raises(SolverError):
        config(PolyPhi((1.0,), 1), grid=(1, 5))
    with pytest.raises(SolverError):
        config(EigenmodePhi(25))
    with pytest.raises(SolverError):
        config(PolyPhi((1.0,), 2))


def test_zero_data():
    cfg = config(PolyPhi((0.0,), 1))
    f = assemble(cfg)
    assert np.all(f.values == 0)
    rep = verify(f, cfg, 256)
    assert max(rep.gaps().values()) <= 1e-12


def test_single_mode_instance():
    cfg = config(FunctionPhi(lambda x: math.sqrt(2) * np.sin(np.pi * x)), grid=(9, 9))
    f = assemble(cfg)
    d1 = delta_n(math.pi**2, REF)
    # u(1/2, 0) = sqrt(2) * phi_1 / Delta(1) with phi_1 = 1
    assert f.row(0.0)[4] == pytest.approx(math.sqrt(2) / d1, rel=1e-8)
    assert f.row(-0.0)[4] == pytest.approx(math.sqrt(2) / d1, rel=1e-8)
    y1 = y_eval(f.modes[0], REF, f.y)
    expect = np.outer(y1, math.sqrt(2) * np.sin(np.pi * f.x))
    np.testing.assert_allclose(f.values, expect, atol=1e-8)
    rep = verify(f, cfg, 4096)
    assert rep.pde_residual_sup <= 5e-3
    assert rep.nonlocal_gap_sup <= 1e-6


def test_grid_layout():
    f = assemble(config(SMOOTH, grid=(5, 4)))
    assert f.values.shape == (8, 5)
    np.testing.assert_allclose(f.y[:4], [-1.0, -2 / 3, -1 / 3, 0.0], atol=1e-15)
    assert np.signbit(f.y[3])
    assert f.y[4] == 0.0 and not np.signbit(f.y[4])
    assert f.branch[0] == ["boundary", "-", "-", "-", "boundary"]
    assert f.branch[4][2] == "+"
    with pytest.raises(SolverError):
        f.row(0.123)


def test_field_invariants():
    cfg = config(SMOOTH)
    f = assemble(cfg)
    np.testing.assert_allclose(f.row(0.0), f.row(-0.0), atol=1e-9)
    assert np.all(f.values[:, 0] == 0) and np.all(f.values[:, -1] == 0)
    assert f.modes_used == 20 and len(f.diagnostics) == 20


def test_smooth_data_verification():
    cfg = config(SMOOTH)
    f = assemble(cfg)
    rep = verify(f, cfg, 4096)
    assert rep.pde_residual_sup <= 5e-3
    assert rep.pde_fd_residual_sup <= 5e-3
    assert rep.conjugation_value_gap <= 1e-9
    assert rep.conjugation_flux_gap <= 1e-9
    assert rep.nonlocal_gap_sup <= 1e-6
    assert rep.mode_closure_gap <= 1e-9
    assert rep.boundary_gap <= 1e-9
    assert rep.bessel_ok
    assert rep.series_bound_ok
    assert rep.uniqueness.violating == []


def test_fourth_order_and_degenerate():
    for spec, phi in [(GreenSpec(2), PolyPhi((1.0,), 2)), (GreenSpec(2, 1.5), PolyPhi((1.0, 1.0), 2))]:
        cfg = config(phi, spec=spec)
        rep = verify(assemble(cfg), cfg, 2048)
        assert rep.pde_fd_residual_sup is None
        assert rep.pde_residual_sup <= 5e-3
        assert rep.nonlocal_gap_sup <= 1e-4
        assert rep.bessel_ok


def test_truncation_stability():
    gaps = []
    for n in (10, 15, 20):
        lo = assemble(config(SMOOTH, modes=n - 5)).values
        hi = assemble(config(SMOOTH, modes=n)).values
        gaps.append(np.max(np.abs(hi - lo)))
    assert gaps[0] > gaps[1] > gaps[2]


def test_unsolvable_instance():
    cfg = config(PolyPhi((1.0,), 1))
    with pytest.raises(UnsolvableInstance) as err:
        assemble(cfg, delta_fn=lambda lam, t: 0.0)
    # even modes have zero data by symmetry
    assert err.value.modes == list(range(1, 21, 2))


def test_resonant_zero_data_assembles():
    f = assemble(config(PolyPhi((0.0,), 1)), delta_fn=lambda lam, t: 0.0)
    assert np.all(f.values == 0)


def test_inadmissible_function():
    with pytest.raises(InadmissibleData):
        assemble(config(FunctionPhi(lambda x: 1 + 0 * x)))


def test_mismatched_field():
    f = assemble(config(SMOOTH, modes=5))
    with pytest.raises(SolverError):
        verify(f, config(SMOOTH, modes=6))


def test_decay_eigenmode():
    cfg = config(EigenmodePhi(1))
    basis = make_basis(cfg)
    d = coefficient_decay(cfg, basis)
    assert d.values[0] == pytest.approx(math.pi**6, rel=1e-8)
    # roundoff in phi_n is amplified by lam_n**3
    assert np.all(d.values[1:] < 1e-14 * basis.lambdas[1:] ** 3)
    assert d.bound is None and d.bounded is None


def test_decay_smooth_poly_bounded():
    cfg = config(SMOOTH)
    d = coefficient_decay(cfg, make_basis(cfg))
    assert d.level == 3
    assert np.all(np.diff(d.partial_sums) >= 0)
    assert d.bounded
    odd = d.values[::2]
    assert np.all(np.isfinite(odd))
    assert odd[-1] < odd[2]


def test_decay_bound_against_quadrature():
    from scipy.integrate import quad

    cfg = config(SMOOTH)
    d = coefficient_decay(cfg, make_basis(cfg))
    # psi_3 = -f^(6) for k = 1, m = 0
    f6 = P.polyder(SMOOTH.polynomial(), 6)
    ref = quad(lambda x: P.polyval(x, f6) ** 2, 0, 1)[0]
    assert d.bound == pytest.approx(ref, rel=1e-10)


def test_determinism():
    cfg = config(SMOOTH)
    a, b = assemble(cfg), assemble(cfg)
    assert np.array_equal(a.values, b.values)
