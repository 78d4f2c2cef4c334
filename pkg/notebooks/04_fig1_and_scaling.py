# %% [markdown]
# # Scaled geometric phase across the transition
#
# A coupling sweep over an N ladder next to the analytic curve, written to an
# SVG, then the fit of the peak derivative against N.

# %%
from pathlib import Path

import numpy as np

from dickegp import crit, model
from dickegp.cli import sweep_figure

params = model.ModelParams()
grid = crit.uniform_grid(0.4, 1.2, 81)
result = crit.sweep(params, [16, 64, 256], grid)

out = Path("fig1_sweep.svg")
out.write_text(sweep_figure(result))
print("wrote", out.resolve())

# %%
for n in result.n_ladder:
    print(f"N={n:4d}: curvature peak at lambda = {crit.estimate_critical_point(result, n):.3f}")
print(f"analytic : {crit.estimate_critical_point(result):.3f}  (lambda_c = {model.critical_coupling(params):.4f})")

# %% [markdown]
# Peak of d(gamma0)/d(lambda) grows linearly with N.

# %%
fit = crit.scaling_fit(params, [32, 64, 128, 256], crit.uniform_grid(0.5, 1.0, 51))
print("peaks     :", np.round(fit.peak_slopes, 2))
print("slope     :", fit.slope, " target:", fit.target, f" ({fit.relative_deviation:+.2%})")
print("R^2       :", fit.r_squared)
