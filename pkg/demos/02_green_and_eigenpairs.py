# Green's function, weighted kernel and the eigenpairs of the spatial operator.

# %%
import numpy as np

from mixedfrac.green_kernel import GreenSpec, green_eval, kernel_eval
from mixedfrac.spectral import (
    bessel_check,
    build_quadrature,
    compute_basis,
    eigenfunction,
    nystrom_residuals,
)

# %% k = 1 is -x(1 - xi) below the diagonal, k = 2 the clamped beam
print(green_eval(GreenSpec(1), 0.25, 0.5))
print(green_eval(GreenSpec(2), 0.3, 0.7), green_eval(GreenSpec(2), 0.7, 0.3))

# weight x**(-m/2) on both sides keeps the kernel symmetric
spec = GreenSpec(2, 0.5)
x = np.linspace(0.05, 0.95, 5)
K = kernel_eval(spec, x[:, None], x[None, :])
print(np.abs(K - K.T).max())

# %% eigenvalues: (n pi)**2 for k = 1, beam values for k = 2
q = build_quadrature(128)
b1 = compute_basis(GreenSpec(1), q, 5)
print(b1.lambdas / (np.arange(1, 6) * np.pi) ** 2)
b2 = compute_basis(GreenSpec(2), q, 3)
print(b2.lambdas, 4.730040744862704**4)

# %% degenerate case m = 0.5
bm = compute_basis(GreenSpec(1, 0.5), q, 5)
print(bm.lambdas)
print(nystrom_residuals(bm))

# %% eigenfunctions off the nodes come from the integral equation
xs = np.linspace(0, 1, 6)
print(eigenfunction(b1, 2, xs))
print(np.sqrt(2) * np.sin(2 * np.pi * xs))

# %% pointwise Bessel inequality sum (X_n/lam_n)**2 <= int G**2
for xv in (0.1, 0.5, 0.9):
    print(xv, bessel_check(b1, xv))
