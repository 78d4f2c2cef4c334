# %% [markdown]
# # Thermodynamic limit
#
# Closed-form ground state of the rotating-wave Dicke model for N -> infinity:
# critical coupling, displacements, energy and geometric phase per atom.

# %%
import numpy as np

from dickegp import model

params = model.ModelParams(omega=1.0, omega0=1.0)
lc = model.critical_coupling(params)
print(f"lambda_c = {lc:.10f}")

# %% [markdown]
# Below `lambda_c` the displacements vanish; above it both the photon and the
# atomic boson condense.

# %%
for lam in (0.5, lc, 0.8, 1.0, 1.4):
    mf = model.mean_field(params, lam)
    print(
        f"lam={lam:.4f}  {mf.phase.value:12s}  alpha={mf.alpha:.6f}  beta={mf.beta:.6f}  "
        f"E0/N={model.ground_energy_per_atom(params, lam):+.6f}  gp/N={model.gp_per_atom(params, lam):.6f}"
    )

# %% [markdown]
# The linear fluctuation terms vanish at the minimum, and the quadratic form
# collapses to three terms in the normal phase.

# %%
mf = model.mean_field(params, 1.0)
fc = model.fluctuation_coefficients(params, 1.0, mf.alpha, mf.beta)
print("h1 at the minimum:", fc.h1_c, fc.h1_d)
print("H2 above lambda_c:", fc.h2.as_dict())
print("H2 at alpha=beta=0:", model.fluctuation_coefficients(params, 0.5, 0.0, 0.0).h2.as_dict())

# %% [markdown]
# The geometric phase is continuous at the transition but its slope jumps from
# 0 to `2 pi lambda_c / omega^2`.

# %%
eps = np.array([1e-2, 1e-3, 1e-4])
print("gp/N / (lam - lc):", [model.gp_per_atom(params, lc + e) / e for e in eps])
print("slope at lc+     :", model.gp_slope_at_critical(params))
