# %% [markdown]
# Throughput of SA, THMA and CSA (7,4) with at most 20 IC iterations.
#
# Fewer frames than the acceptance run so the script finishes in about a
# minute; pass a frame count as the first argument for smoother curves.

# %%
import math
import sys

import numpy as np

from codedaloha import CodeParams, de, sweep

frames = int(sys.argv[1]) if len(sys.argv) > 1 else 200
grid = np.round(np.arange(0.1, 1.41, 0.1), 10)
code = CodeParams(7, 4)

curves = {}
for n_sa in (100, 400):
    curves[f"CSA N={n_sa}"] = [s.t_mean for s in sweep("CSA", code, n_sa, grid, frames, 20, master_seed=1)]
curves["THMA N=400"] = [s.t_mean for s in sweep("THMA", code, 400, grid, frames, master_seed=1)]
curves["SA N=400"] = [s.t_mean for s in sweep("SA", CodeParams.uncoded(), 400, grid, frames, master_seed=1)]
curves["CSA N=inf"] = [de.asymptotic_throughput(g, code, 20)[1] for g in grid]
curves["SA Ge^-G"] = [g * math.exp(-g) for g in grid]

# %%
print("   G " + " ".join(f"{k:>11}" for k in curves))
for i, g in enumerate(grid):
    print(f"{g:4.1f} " + " ".join(f"{v[i]:11.4f}" for v in curves.values()))

# %% [markdown]
# CSA carries almost all offered traffic up to G = 0.5, peaks near 0.55,
# then collapses onto the THMA curve once the IC process stalls.
