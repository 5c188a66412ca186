# Truncated series u(x, y) = sum X_n(x) Y_n(y) and its verification report.

# %%
import numpy as np

from mixedfrac import GreenSpec, PolyPhi, ProblemConfig, TemporalConfig, assemble, verify

cfg = ProblemConfig(
    spec=GreenSpec(1, 0.0),
    temporal=TemporalConfig(0.5, 1.5, 1.0, 1.0),
    phi=PolyPhi((1.0,), k=1),  # x (1 - x)
    modes=20,
    quad_order=128,
    grid=(33, 33),
)
field = assemble(cfg)

# %% the interface is stored twice
print(field.row(0.0)[16], field.row(-0.0)[16])
print(field.values.shape, field.y[31:35])

# %% nonlocal condition u(x, b) - u(x, -a) = phi(x)
gap = field.values[-1] - field.values[0] - field.x * (1 - field.x)
print(np.abs(gap).max())

# %%
rep = verify(field, cfg, steps=4096)
for k, v in rep.gaps().items():
    print(f"{k:24s} {v:.3e}")
print("fd cross-check", rep.pde_fd_residual_sup)
print("bessel", rep.bessel_ok)

# %% |lam_n**3 phi_n| grows here: x(1-x) has nonzero second derivative at the ends
print(rep.coefficient_decay[::2])
print(rep.decay_level, rep.decay_bound, rep.decay_bounded)

# %% smoother data x**5 (1-x)**5 satisfies all three levels
P = np.polynomial.polynomial
# the family already carries x (1-x); the extra factor is x**4 (1-x)**4
smooth = PolyPhi(tuple(P.polymul([0, 0, 0, 0, 1], P.polypow([1, -1], 4))), k=1)
cfg2 = ProblemConfig(cfg.spec, cfg.temporal, smooth, 20, 128, (33, 33))
rep2 = verify(assemble(cfg2), cfg2, steps=1024)
print(rep2.decay_level, rep2.decay_partial_sums[-1], rep2.decay_bound, rep2.decay_bounded)
