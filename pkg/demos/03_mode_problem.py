# One spatial mode: fractional relaxation for y > 0, fractional oscillation for
# y < 0, glued at y = 0 and closed by Y(b) - Y(-a) = phi_n.

# %%
import math

import numpy as np

from mixedfrac.temporal import (
    TemporalConfig,
    caputo_of_mode,
    delta_limit,
    delta_n,
    solve_mode,
    uniqueness_report,
    y_eval,
)

cfg = TemporalConfig(alpha=0.5, beta=1.5, a=1.0, b=1.0)

# %% Delta tends to -1/(a**(beta-1) Gamma(2-beta))
print("limit", delta_limit(cfg))
for lam in (1.0, 1e2, 1e4, 1e6):
    print(f"{lam:8.0e}  {delta_n(lam, cfg):.10f}")

# %% coefficients and profile
lam = math.pi**2
sol = solve_mode(lam, phi_n=1.0, cfg=cfg)
print(sol)
y = np.linspace(-1, 1, 9)
print(np.c_[y, y_eval(sol, cfg, y)])
print("closure", y_eval(sol, cfg, 1.0) - y_eval(sol, cfg, -1.0))

# %% Caputo derivative by product integration, should be -lam*Y
for yv in (-0.7, -0.2, 0.2, 0.7):
    d = caputo_of_mode(sol, cfg, yv, 4096)
    print(yv, d, -lam * y_eval(sol, cfg, yv))

# %% no Delta(n) vanishes for the second-order spectrum
rep = uniqueness_report([(n * math.pi) ** 2 for n in range(1, 21)], cfg)
print(rep.violating, rep.separation, rep.separated_from, rep.largest_zero)
