# %% [markdown]
# # Heading consensus
#
# Ten robots start with random headings and average what they hear.
# Then one of them is told to hold 45 degrees and the rest follow.

# %%
import math

from swarmkit import metrics, scenario
from swarmkit.engine import Engine, run
from swarmkit.scenario import Event

cfg = scenario.load_bundled("consensus_10")
res = run(cfg)
print(res.termination.value, "after", res.ticks, "ticks")

# %%
for r in res.records[:8]:
    print(r.tick, round(metrics.heading_order(r.active), 4))

# %% [markdown]
# ## A leader takes over

# %%
eng = Engine(cfg)
eng.inject_event(40, Event(40, "set_leader", (3,), heading_deg=45.0))
res = eng.run()
final = [round(math.degrees(a.heading.angle), 2) for a in res.records[-1].active]
print(res.ticks, final)

# %% [markdown]
# ## Two groups out of radio range
#
# Each group settles on its own heading.  At tick 200 the range grows and
# they merge.

# %%
res = run(scenario.load_bundled("consensus_split_10"))
before = res.records[199]
for side in (range(5), range(5, 10)):
    hs = [before.agent(i).heading for i in side]
    print(round(math.degrees(math.atan2(sum(h.y for h in hs), sum(h.x for h in hs))), 1))
print(res.termination.value, res.ticks)
