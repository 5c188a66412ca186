"""Series solution of a mixed fractional problem with conjugation and
nonlocal conditions for a degenerate even-order operator in ``x``."""

from .data import EigenmodePhi, FunctionPhi, PolyPhi, PowerSum
from .green_kernel import GreenSpec, green_eval, kernel_eval
from .mittag_leffler import ml_eval, ml_eval_array, ml_largest_real_zero
from .solver import ProblemConfig, SolutionField, UnsolvableInstance, assemble, verify
from .spectral import build_quadrature, compute_basis, fourier_coefficients, nystrom_extend
from .temporal import Status, TemporalConfig, delta_n, solve_mode, uniqueness_report, y_eval

__all__ = [
    "EigenmodePhi",
    "FunctionPhi",
    "GreenSpec",
    "PolyPhi",
    "PowerSum",
    "ProblemConfig",
    "SolutionField",
    "Status",
    "TemporalConfig",
    "UnsolvableInstance",
    "assemble",
    "build_quadrature",
    "compute_basis",
    "delta_n",
    "fourier_coefficients",
    "green_eval",
    "kernel_eval",
    "ml_eval",
    "ml_eval_array",
    "ml_largest_real_zero",
    "nystrom_extend",
    "solve_mode",
    "uniqueness_report",
    "verify",
    "y_eval",
]
