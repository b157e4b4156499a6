# %% [markdown]
# # Pareto optimization on a tiny coverage instance
#
# Three sets over the items 1..5. Greedy, exact search and PO all agree
# that two sets suffice to cover everything.

# %%
from paretosub import CoverageObjective, RngStreams, brute_force_sm, run_po
from paretosub.optimizers import extract_sm, run_greedy

f = CoverageObjective([{1, 2, 3}, {3, 4}, {4, 5}])
print("exact:", brute_force_sm(f, 2).opt_value)

X, value, _ = run_greedy(f.fresh(), 2)
print("greedy:", X.indices().tolist(), value)

# %% [markdown]
# PO keeps one solution per cardinality. After a few dozen iterations the
# archive holds the best set of each size below P.

# %%
oracle = f.fresh()
pool, traj = run_po(oracle, P=3, T=60, rng=RngStreams(0))
for e in pool:
    print(e.cardinality, e.subset.indices().tolist(), e.value)
print("best with at most 2 sets:", extract_sm(pool, 2).value, "queries:", oracle.queries)
