# %% [markdown]
# # Geometric phase two ways
#
# The closed form `2 pi <a^+ a>` against a discrete loop product of rotated
# copies of the state.  The loop error falls off as 1/K^2.

# %%
import numpy as np

from dickegp import model
from dickegp.gp import NumberBasisState, gp_closed_form, gp_loop, min_loop_steps
from dickegp.sector_ed import ground_state

state = NumberBasisState.from_ground_state(ground_state(model.ModelParams(), 4, 1.2))
print("photon numbers", state.photons, "weights", state.probabilities.round(4))
print("closed form   ", gp_closed_form(state))
print("smallest K    ", min_loop_steps(state))

# %%
ks = np.array([64, 128, 256, 512, 1024])
errors = np.array([abs(gp_loop(state, k) - gp_closed_form(state)) for k in ks])
for k, e in zip(ks, errors):
    print(f"K={k:5d}  |loop - closed| = {e:.3e}")
print("fitted order:", -np.polyfit(np.log(ks), np.log(errors), 1)[0])
