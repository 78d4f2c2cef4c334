# %% [markdown]
# # Finite N: excitation-number sectors
#
# `a^+ a + Jz + N/2` commutes with H, so each sector is a small tridiagonal
# matrix.  The ground state is the lowest sector minimum.

# %%
import numpy as np

from dickegp import model
from dickegp.sector_ed import build_sector, dense_oracle, ground_state, sector_ground, sector_minima

params = model.ModelParams()
tri = build_sector(params, n_atoms=1, lam=0.3, excitation=1)
print("diag", tri.diag, "offdiag", tri.offdiag)
print("lowest eigenpair", sector_ground(tri))

# %% [markdown]
# Cross-check against the brute-force product-basis Hamiltonian.

# %%
print("dense spectrum (N=1, lam=0.3):", dense_oracle(params, 1, 0.3, 8)[:4])
print("sector minima M=0..3         :", sector_minima(params, 1, 0.3, 3))

# %% [markdown]
# Sector minima against M: the ground sector moves up as the coupling grows.

# %%
for lam in (0.5, 0.9, 1.2):
    minima = sector_minima(params, 32, lam, 60)
    print(f"lam={lam}: ground sector {int(np.argmin(minima))}")

# %% [markdown]
# Energy and photon number per atom approach the mean-field values.

# %%
lam = 1.1
for n in (16, 32, 64, 128, 256):
    gs = ground_state(params, n, lam)
    print(
        f"N={n:4d}  M*={gs.sector:4d}  E/N={gs.energy_per_atom:+.6f} "
        f"(inf: {model.ground_energy_per_atom(params, lam):+.6f})  "
        f"<n>/N={gs.photon_expectation / n:.6f} (inf: {model.mean_field(params, lam).alpha ** 2:.6f})"
    )
