# %% [markdown]
# # Submodular cover and the iteration bounds
#
# PO with P = n + 1 also solves the cover problem: run it for the prescribed
# number of iterations, then read off the best set below a size cap.

# %%
import math

import numpy as np

from paretosub import CoverageObjective, RngStreams, SubsetMask, brute_force_sc, run_po
from paretosub import t_bound_po, t_bound_posc
from paretosub.bounds import GuaranteeSpec, all_bounds
from paretosub.optimizers import extract_sc, run_greedy_cover

rng = np.random.default_rng(3)
f = CoverageObjective([set(rng.choice(20, size=4, replace=False).tolist()) for _ in range(10)], m=20)
tau = 0.8 * f.evaluate(SubsetMask.full(10))
opt = brute_force_sc(f, tau)
print("tau", tau, "smallest cover", opt.opt_set.indices().tolist())
print("greedy cover", run_greedy_cover(f.fresh(), tau)[0].indices().tolist())

# %%
delta = 0.5
T = t_bound_posc(10, delta)
cap = math.ceil(math.log(1 / delta) * opt.cardinality)
# the cap sits below |A*|, so the promise is a (1 - delta)^2 fraction of tau
reached = [extract_sc(run_po(f.fresh(), 11, T, RngStreams(s))[0], tau, cap).entry.value / tau
           for s in range(20)]
print(f"T={T}, cap={cap}: mean fraction of tau {np.mean(reached):.3f} (promised {(1 - delta) ** 2})")

# %% [markdown]
# The same numbers from the calculator, plus a few others.

# %%
print(t_bound_po(10, 5, 0.5))
print(all_bounds(GuaranteeSpec("BPO", n=100, P=100, p=0.5, eps=0.1, xi=0.5)))
