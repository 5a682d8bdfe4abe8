import copy
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from swarmkit import scenario
from swarmkit.core import BehaviorKind, ConfigError, Vec2

BASE = {
    "seed": 1,
    "world": {"bounds": [0.0, 0.0, 10.0, 5.0]},
    "agents": {"count": 3, "placement": {"kind": "grid", "spacing": 1.0, "columns": 3},
               "behavior": {"kind": "consensus"}},
    "network": {"loss": "off"},
    "run": {"max_ticks": 20},
}


def doc(**patch):
    d = copy.deepcopy(BASE)
    for path, value in patch.items():
        node = d
        keys = path.split("__")
        for k in keys[:-1]:
            node = node[k]
        if value is _DROP:
            del node[keys[-1]]
        else:
            node[keys[-1]] = value
    return d


_DROP = object()


@pytest.mark.parametrize("name", scenario.bundled_names())
def test_bundled_round_trip(name, tmp_path):
    cfg = scenario.load_bundled(name)
    path = tmp_path / "again.json"
    scenario.save(cfg, path)
    again = scenario.load(path, env={})
    assert again.to_dict() == cfg.to_dict()
    assert again.config_hash() == cfg.config_hash()
    scenario.save(again, tmp_path / "third.json")
    assert path.read_bytes() == (tmp_path / "third.json").read_bytes()


def test_expected_bundle_present():
    names = set(scenario.bundled_names())
    for n in ("consensus_10", "perimeter_5", "perimeter_7", "perimeter_8", "perimeter_10", "search_sweep",
              "aggregation_45", "leader_follower_45", "avoidance_yield", "avoidance_around",
              "avoidance_through"):
        assert n in names


@pytest.mark.parametrize("key", ["seed", "world", "agents", "network", "run"])
def test_missing_top_level_key_is_named(key):
    with pytest.raises(ConfigError, match=f"'{key}'"):
        scenario.from_dict(doc(**{key: _DROP}))


@pytest.mark.parametrize("patch, fragment", [
    ({"bogus": 1}, "bogus"),
    ({"agents__behavior__kind": "dance"}, "agents.behavior.kind"),
    ({"agents__behavior__p0": -1.0}, "p0"),
    ({"agents__count": 0}, "agents.count"),
    ({"network__loss": "maybe"}, "network.loss"),
    ({"run__tick_duration": 0}, "run.tick_duration"),
    ({"world__body": {"kind": "tank"}}, "world.body.kind"),
    ({"events": [{"tick": 3, "type": "remove_agent", "id": 9}]}, "unknown agent"),
    ({"events": [{"tick": 30, "type": "remove_agent", "id": 1}]}, "max_ticks"),
    ({"events": [{"tick": 3, "type": "explode"}]}, "type"),
    ({"agents__behavior": {"kind": "exploration", "H": 1, "goal": {"leader": 5}}}, "leader"),
    ({"agents__placement": {"kind": "explicit", "positions": [[0, 0]]}}, "positions"),
    ({"seed": 1.5}, "seed"),
])
def test_invalid_documents(patch, fragment):
    with pytest.raises(ConfigError, match=fragment.replace(".", r"\.").replace("[", r"\[")):
        scenario.from_dict(doc(**patch))


def test_speed_gain_defaults_to_delta_over_dt():
    cfg = scenario.from_dict(doc(agents__behavior={"kind": "exploration", "delta": 2.0}, run__tick_duration=0.5))
    assert cfg.behavior.speed_gain == 4.0


def test_overrides_and_aliases():
    d = scenario.apply_overrides(BASE, ["n_agents=7", "agents.behavior.cruise_speed=0.3", "run.max_ticks=5",
                                        "world.bounds=[0, 0, 20, 20]"])
    cfg = scenario.from_dict(d)
    assert cfg.n_agents == 7 and cfg.max_ticks == 5
    assert cfg.behavior.cruise_speed == 0.3
    assert cfg.world.bounds == (0.0, 0.0, 20.0, 20.0)
    assert BASE["agents"]["count"] == 3  # input untouched


@pytest.mark.parametrize("bad", ["nokey", "agents.nothere.x=1", "seed.x=1"])
def test_bad_override_paths(bad):
    with pytest.raises(ConfigError):
        scenario.apply_overrides(BASE, [bad])


def test_env_seed(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(BASE))
    assert scenario.load(p, env={"SWARMKIT_SEED": "99"}).seed == 99
    assert scenario.load(p, env={}).seed == 1
    with pytest.raises(ConfigError):
        scenario.load(p, env={"SWARMKIT_SEED": "x"})


def test_per_agent_behaviour_overrides():
    cfg = scenario.from_dict(doc(agents__behavior={"kind": "exploration", "p0": 100.0},
                                 agents__overrides=[{"ids": [2], "behavior": {"H": 1, "goal": [5, 5]}}]))
    specs = cfg.behaviors
    assert specs[0].H == 0 and specs[2].H == 1
    assert specs[2].goal == Vec2(5, 5) and specs[2].p0 == 100.0
    assert specs[1].kind is BehaviorKind.EXPLORATION


_leaves = st.sampled_from([
    ("seed", st.integers(0, 2**32)),
    ("agents.count", st.integers(1, 12)),
    ("run.max_ticks", st.integers(21, 999)),
    ("run.tick_duration", st.floats(0.01, 10)),
    ("network.comm_range", st.floats(1, 1000)),
    ("agents.behavior.cruise_speed", st.floats(0, 2)),
])


@given(_leaves.flatmap(lambda kv: st.tuples(st.just(kv[0]), kv[1])))
def test_config_hash_tracks_effective_parameters(kv):
    key, value = kv
    a = scenario.from_dict(BASE)
    b = scenario.from_dict(scenario.apply_overrides(BASE, [f"{key}={json.dumps(value)}"]))
    node = a.to_dict()
    for part in key.split("."):
        node = node[part]
    assert (a.config_hash() == b.config_hash()) == (node == value)


def test_hash_sees_defaults_made_explicit():
    # writing a default out explicitly must not change the hash
    a = scenario.from_dict(BASE)
    b = scenario.from_dict(doc(network__comm_range=310.0, network__ttl=3))
    assert a.config_hash() == b.config_hash()
