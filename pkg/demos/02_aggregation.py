# %% [markdown]
# # Aggregation and the intruder lattice
#
# 45 agents hold 50 m spacing, then p0 drops to 5 m at tick 400.

# %%
import statistics

from swarmkit import metrics, scenario
from swarmkit.engine import run

res = run(scenario.load_bundled("aggregation_45"))
area = [metrics.coverage_area(r.active) for r in res.records]
for t in (0, 100, 399, 450, 699):
    print(t, round(area[t], 1))

# %%
wide = statistics.fmean(area[350:400])
tight = statistics.fmean(area[-50:])
print("contraction", round(wide / tight, 1))

# %% [markdown]
# ## Three intruders
#
# Same goal, three setups: a live lattice that yields, and a frozen lattice
# passed around (p0 = 100) or through (p0 = 50).

# %%
INTRUDER = 16
for name in ("avoidance_yield", "avoidance_around", "avoidance_through"):
    res = run(scenario.load_bundled(name))
    lattice = [a.position for a in res.records[0].agents if a.id != INTRUDER]
    hull = metrics.convex_hull(lattice)
    inside = sum(metrics.inside_hull(p, hull) for p in res.trajectory(INTRUDER))
    end = res.records[-1].agent(INTRUDER).position
    print(name, "ticks inside hull:", inside, "end:", round(end.x, 1), round(end.y, 1))
