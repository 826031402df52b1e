# %% [markdown]
# Iterative interference cancellation on a tiny frame
#
# Three users split their burst into k=2 units and add one parity unit,
# a (3,2) single parity-check code, then send the 3 units in 3 of 7 slots.

# %%
import sys

from codedaloha import CodeParams, FrameGraph, ic_decode, thma_decode
from codedaloha.frame import empirical_degree_dist

code = CodeParams(3, 2)
frame = FrameGraph.from_assignments([[0, 1, 2], [2, 3, 6], [4, 5, 3]], n_csa=7, code=code)

print("slot occupancy:", frame.slot_degree.tolist())
print("node-perspective degree distribution:", empirical_degree_dist(frame).coeffs.round(3).tolist())

# %% [markdown]
# Without cancellation (THMA) only bursts with two clean units come through.

# %%
print("THMA recovers", sorted(thma_decode(frame, code).recovered))

# %% [markdown]
# With IC the units of bursts 0 and 2 are subtracted from slots 2 and 3,
# leaving burst 1 with three clean units in the second iteration.

# %%
res = ic_decode(frame, code, keep_trace=True)
res.write_trace(sys.stdout)
print("per-iteration recoveries:", res.per_iteration_recovered)
