# Two-parameter Mittag-Leffler function on the real line.

# %%
import math

import numpy as np

from mixedfrac.mittag_leffler import (
    crossover,
    envelope_constant,
    ml_eval,
    ml_eval_array,
    ml_largest_real_zero,
)

# %% known special cases
print(ml_eval(1.0, 1.0, -1.0), math.exp(-1.0))
print(ml_eval(0.5, 1.0, -1.0), math.e * math.erfc(1.0))
print(ml_eval(2.0, 2.0, -math.pi**2))  # sin(pi)/pi

# %% slow algebraic decay for 0 < alpha < 1
for t in (1e2, 1e4, 1e6):
    v = ml_eval(0.5, 1.0, -t)
    print(f"t={t:8.0e}  E={v:.6e}  t*E*Gamma(1/2)={v * t * math.sqrt(math.pi):.8f}")

# %% series below |z| = 36**mu, asymptotics above
print("switch for mu=1.5 at", crossover(1.5))
z = -np.geomspace(1e-2, 1e5, 8)
print(np.c_[z, ml_eval_array(1.5, 2.0, z)])

# %% the envelope |E(-t)| <= M / (1 + t)
for mu, eta in [(0.5, 1.0), (1.5, 1.0), (1.5, 2.0)]:
    print(mu, eta, envelope_constant(mu, eta))

# %% real zeros of E_{beta,2}(-t)
for beta in (1.2, 1.7, 1.9):
    cert = ml_largest_real_zero(beta)
    print(beta, cert.largest_zero_h, cert.zero_count_scanned)
