# %% [markdown]
# # Search speed against swarm size
#
# Robots wander a room until one sees the light, then everyone converges
# on it.  More robots find it sooner.

# %%
from swarmkit import cli, scenario

path = scenario.bundled_path("search_sweep")
rows = cli.sweep(path, [2, 4, 6, 8, 10], seeds=10, base_seed=1, workers=4)

# %%
for r in rows:
    if r["row"] == "aggregate":
        print(r["n"], round(r["first_find_speed_mean"], 4), round(r["first_find_speed_std"], 4),
              r["timeouts"])

# %% [markdown]
# Speeds are 1/seconds, so larger is faster.  The same table lands in
# `sweep.csv` with
#
#     swarmkit sweep search_sweep --agents 2,4,6,8,10 --seeds 10 --out out/

# %% [markdown]
# ## Network check
#
# A frozen pair 40 m apart, 10^4 ticks, loss on.

# %%
from swarmkit import metrics
from swarmkit.engine import run

cfg = scenario.from_dict({
    "seed": 2,
    "world": {"body": {"kind": "holonomic", "noise": {"position": 0.0, "heading_deg": 0.0}}},
    "agents": {"count": 2, "placement": {"kind": "explicit", "positions": [[0, 0], [40, 0]]},
               "behavior": {"kind": "consensus", "cruise_speed": 0.0},
               "overrides": [{"ids": [0, 1], "frozen": True}]},
    "network": {"loss": "on"},
    "run": {"max_ticks": 10000, "termination": "max_ticks", "verbose_net": True},
})
for b in metrics.comm_stats(run(cfg)):
    print(b.lo, b.hi, b.trials, round(b.ratio, 3))
