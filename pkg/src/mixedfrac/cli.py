"""Batch runner: ``key = value`` config in, CSV and JSON out.

Exit codes: 0 success, 1 unexpected failure (I/O), 2 resonant instance with
nonzero data, 3 configuration error, 4 verification threshold exceeded under
``--strict``.  Every error prints one ``error=<kind> detail=<text>`` line on
stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .data import EigenmodePhi, PolyPhi
from .green_kernel import GreenSpec, KernelDomainError
from .spectral import SpectralError
from .solver import (
    ProblemConfig,
    SolverError,
    UnsolvableInstance,
    assemble,
    verify,
)
from .temporal import TemporalConfig, TemporalError

EXIT_OK, EXIT_FAILURE, EXIT_RESONANT, EXIT_CONFIG, EXIT_STRICT = 0, 1, 2, 3, 4
DIGITS_ENV = "MIXEDFRAC_DIGITS"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    k: int = 1
    m: float = 0.0
    alpha: float = 0.5
    beta: float = 1.5
    a: float = 1.0
    b: float = 1.0
    phi_family: str = "poly"
    phi_coefficients: tuple[float, ...] = (1.0,)
    phi_index: int = 1
    modes: int = 20
    quad_order: int = 128
    grid_nx: int = 33
    grid_ny: int = 33
    resonance_tol: float | None = None
    phi_tol: float = 1e-12
    tol_pde: float = 5e-3
    tol_interface: float = 1e-9
    tol_nonlocal: float = 1e-4
    tol_closure: float = 1e-9
    tol_boundary: float = 1e-9

    def problem(self) -> ProblemConfig:
        spec = GreenSpec(self.k, self.m)
        temporal = TemporalConfig(self.alpha, self.beta, self.a, self.b)
        if self.phi_family == "poly":
            phi = PolyPhi(self.phi_coefficients, self.k)
        else:
            phi = EigenmodePhi(self.phi_index)
        return ProblemConfig(
            spec,
            temporal,
            phi,
            self.modes,
            self.quad_order,
            (self.grid_nx, self.grid_ny),
            self.resonance_tol,
            self.phi_tol,
        )


_INT_KEYS = {"k", "phi_index", "modes", "quad_order", "grid_nx", "grid_ny"}


def _parse_float(key, text):
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {text!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{key}: not finite")
    return v


def _parse_value(key, text):
    if key in _INT_KEYS:
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"{key}: not an integer: {text!r}") from None
    if key == "phi_family":
        if text not in ("poly", "eigenmode"):
            raise ConfigError(f"phi_family must be poly or eigenmode, got {text!r}")
        return text
    if key == "phi_coefficients":
        parts = [p for p in text.replace(",", " ").split() if p]
        if not parts:
            raise ConfigError("phi_coefficients is empty")
        return tuple(_parse_float(key, p) for p in parts)
    if key == "resonance_tol" and text.lower() in ("none", "auto", ""):
        return None
    v = _parse_float(key, text)
    return v


def parse_config(text: str) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, val = (s.strip() for s in line.partition("="))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, val)
    return RunConfig(**values)


def dump_config(cfg: RunConfig) -> str:
    out = []
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        if v is None:
            text = "none"
        elif isinstance(v, tuple):
            text = " ".join(repr(float(c)) for c in v)
        elif isinstance(v, float):
            text = repr(v)
        else:
            text = str(v)
        out.append(f"{f.name} = {text}")
    return "\n".join(out) + "\n"


def _digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    if raw is None:
        return 17
    try:
        d = int(raw)
    except ValueError:
        raise ConfigError(f"{DIGITS_ENV} must be an integer") from None
    if not 1 <= d <= 17:
        raise ConfigError(f"{DIGITS_ENV} must lie in [1, 17]")
    return d


def _num(v: float, digits: int) -> str:
    return format(float(v), f".{digits}g")


def write_solution(path: Path, fld, digits: int) -> None:
    lines = ["x,y,branch,u"]
    for j, yy in enumerate(fld.y):
        ys = _num(yy, digits)
        for i, xx in enumerate(fld.x):
            lines.append(f"{_num(xx, digits)},{ys},{fld.branch[j][i]},{_num(fld.values[j, i], digits)}")
    path.write_text("\n".join(lines) + "\n")


def write_modes(path: Path, fld, digits: int) -> None:
    lines = ["n,lambda,phi_n,delta_n,status"]
    for n, s in enumerate(fld.modes, start=1):
        lines.append(
            f"{n},{_num(s.lam, digits)},{_num(s.phi_n, digits)},{_num(s.delta_n, digits)},{s.status.value}"
        )
    path.write_text("\n".join(lines) + "\n")


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def report_dict(cfg: RunConfig, fld, rep) -> dict:
    uq = rep.uniqueness
    return {
        "config": {f.name: _jsonable(getattr(cfg, f.name)) for f in fields(RunConfig)},
        "modes_used": fld.modes_used,
        "verification": {
            "pde_residual_sup": _jsonable(rep.pde_residual_sup),
            "pde_scale": _jsonable(rep.pde_scale),
            "pde_fd_residual_sup": _jsonable(rep.pde_fd_residual_sup),
            "conjugation_value_gap": _jsonable(rep.conjugation_value_gap),
            "conjugation_flux_gap": _jsonable(rep.conjugation_flux_gap),
            "nonlocal_gap_sup": _jsonable(rep.nonlocal_gap_sup),
            "mode_closure_gap": _jsonable(rep.mode_closure_gap),
            "boundary_gap": _jsonable(rep.boundary_gap),
            "bessel_ok": bool(rep.bessel_ok),
            "bessel_margin": _jsonable(rep.bessel_margin),
            "coefficient_decay": _jsonable(rep.coefficient_decay),
            "decay_partial_sums": _jsonable(rep.decay_partial_sums),
            "decay_level": rep.decay_level,
            "decay_bound": _jsonable(rep.decay_bound),
            "decay_bounded": rep.decay_bounded,
            "series_tail_lhs": _jsonable(rep.series_tail_lhs),
            "series_tail_rhs": _jsonable(rep.series_tail_rhs),
            "series_bound_ok": bool(rep.series_bound_ok),
        },
        "uniqueness": {
            "entries": [
                {"mode": e.mode, "delta_n": _jsonable(e.delta_n), "status": e.status} for e in uq.entries
            ],
            "limit": _jsonable(uq.limit),
            "separation": _jsonable(uq.separation),
            "largest_zero": _jsonable(uq.largest_zero),
            "first_above_zero": uq.first_above_zero,
            "separated_from": uq.separated_from,
            "tolerance": _jsonable(uq.tolerance),
        },
    }


def strict_failures(cfg: RunConfig, rep) -> list[str]:
    checks = [
        ("pde_residual_sup", rep.pde_residual_sup, cfg.tol_pde),
        ("conjugation_value_gap", rep.conjugation_value_gap, cfg.tol_interface),
        ("conjugation_flux_gap", rep.conjugation_flux_gap, cfg.tol_interface),
        ("nonlocal_gap_sup", rep.nonlocal_gap_sup, cfg.tol_nonlocal),
        ("mode_closure_gap", rep.mode_closure_gap, cfg.tol_closure),
        ("boundary_gap", rep.boundary_gap, cfg.tol_boundary),
    ]
    bad = [f"{name}={val:.3e}>{lim:.1e}" for name, val, lim in checks if not val <= lim]
    if not rep.bessel_ok:
        bad.append("bessel")
    return bad


def _fail(kind: str, detail: str, code: int) -> int:
    detail = " ".join(str(detail).split())
    print(f"error={kind} detail={detail}", file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mixedfrac", description=__doc__.splitlines()[0])
    p.add_argument("--config", required=True, help="key = value configuration file")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--strict", action="store_true", help="exit 4 when a gap exceeds its threshold")
    p.add_argument("--dry-run", action="store_true", help="print the resolved config and stop")
    p.add_argument("--verify-steps", type=int, default=4096, help="Caputo oracle mesh size")
    p.add_argument("--seedless", action="store_true", help="accepted; runs are always deterministic")
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(Path(args.config).read_text())
        problem = cfg.problem()
        digits = _digits()
        if args.verify_steps < 64:
            raise ConfigError("--verify-steps must be at least 64")
    except OSError as exc:
        return _fail("config", f"cannot read {args.config}: {exc.strerror}", EXIT_CONFIG)
    except (ConfigError, SolverError, KernelDomainError, TemporalError) as exc:
        return _fail("config", exc, EXIT_CONFIG)
    if args.dry_run:
        sys.stdout.write(dump_config(cfg))
        return EXIT_OK
    try:
        fld = assemble(problem)
    except UnsolvableInstance as exc:
        return _fail("resonant", f"modes={','.join(map(str, exc.modes))}", EXIT_RESONANT)
    except (SpectralError, SolverError) as exc:
        return _fail("config", exc, EXIT_CONFIG)
    rep = verify(fld, problem, args.verify_steps)
    try:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_solution(out / "solution.csv", fld, digits)
        write_modes(out / "modes.csv", fld, digits)
        text = json.dumps(report_dict(cfg, fld, rep), indent=2, sort_keys=True)
        (out / "report.json").write_text(text + "\n")
    except OSError as exc:
        return _fail("io", f"{exc.filename}: {exc.strerror}", EXIT_FAILURE)
    if args.strict:
        bad = strict_failures(cfg, rep)
        if bad:
            return _fail("verification", ";".join(bad), EXIT_STRICT)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
