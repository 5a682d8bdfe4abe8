"""Scenario files: strict JSON schema, loading, saving and overrides.

A scenario document has exactly the top-level keys ``seed``, ``world``,
``agents``, ``network``, ``run`` and optionally ``events``.  Unknown keys
anywhere are rejected.  The field-by-field reference is
``docs/scenario-schema.md`` in the source tree.
"""

from __future__ import annotations

import copy
import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .bodysim import BodyKind, Light, SensorConfig, World
from .core import BehaviorKind, BehaviorSpec, ConfigError, Vec2
from .netsim import FIELD_LOSS_TABLE, LossRow, NetworkModel

SEED_ENV = "SWARMKIT_SEED"
EVENT_TYPES = ("remove_agent", "set_leader", "degrade_agent", "set_p0", "set_comm_range")
PLACEMENTS = ("box", "disc", "grid", "explicit")
TERMINATIONS = ("auto", "max_ticks", "consensus", "search")


# -- small strict readers ----------------------------------------------------

def _require(d: Mapping, key: str, where: str):
    if key not in d:
        raise ConfigError(f"missing key '{where}{key}'")
    return d[key]


def _check_keys(d: Any, allowed, where: str) -> None:
    if not isinstance(d, dict):
        raise ConfigError(f"'{where.rstrip('.') or 'scenario'}' must be an object")
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key '{where}{unknown[0]}'")


def _num(v, where: str, positive=False, nonneg=False) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"'{where}' must be a number")
    v = float(v)
    if positive and not v > 0:
        raise ConfigError(f"'{where}' must be positive")
    if nonneg and v < 0:
        raise ConfigError(f"'{where}' must be non-negative")
    return v


def _int(v, where: str, minimum: Optional[int] = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"'{where}' must be an integer")
    if minimum is not None and v < minimum:
        raise ConfigError(f"'{where}' must be >= {minimum}")
    return v


def _bool(v, where: str) -> bool:
    if not isinstance(v, bool):
        raise ConfigError(f"'{where}' must be true or false")
    return v


def _point(v, where: str) -> Vec2:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ConfigError(f"'{where}' must be an [x, y] pair")
    return Vec2(_num(v[0], where), _num(v[1], where))


def _pt(p: Vec2) -> List[float]:
    return [p.x, p.y]


# -- sections -----------------------------------------------------------------

@dataclass(frozen=True)
class BodyConfig:
    kind: BodyKind = BodyKind.differential_drive()
    sensors: SensorConfig = SensorConfig()

    @classmethod
    def from_dict(cls, d: Mapping, where="world.body.") -> "BodyConfig":
        _check_keys(d, ("kind", "max_speed", "max_turn_rate", "noise", "sensor_range", "n_rays"), where)
        kind = d.get("kind", "differential_drive")
        if kind not in ("differential_drive", "holonomic"):
            raise ConfigError(f"'{where}kind' must be differential_drive or holonomic")
        default_speed = 0.20 if kind == "differential_drive" else 1.0
        body = BodyKind(kind, _num(d.get("max_speed", default_speed), where + "max_speed", positive=True),
                        _num(d.get("max_turn_rate", 2.0), where + "max_turn_rate", positive=True))
        noise = d.get("noise", {})
        _check_keys(noise, ("position", "heading_deg"), where + "noise.")
        sensors = SensorConfig(
            n_rays=_int(d.get("n_rays", 6), where + "n_rays", minimum=0),
            sensor_range=_num(d.get("sensor_range", 0.8), where + "sensor_range", positive=True),
            position_sigma=_num(noise.get("position", 0.01), where + "noise.position", nonneg=True),
            heading_sigma_deg=_num(noise.get("heading_deg", 0.5), where + "noise.heading_deg", nonneg=True),
        )
        return cls(body, sensors)

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind.type.value,
            "max_speed": self.kind.max_speed,
            "max_turn_rate": self.kind.max_turn_rate,
            "noise": {"position": self.sensors.position_sigma, "heading_deg": self.sensors.heading_sigma_deg},
            "sensor_range": self.sensors.sensor_range,
            "n_rays": self.sensors.n_rays,
        }


def _world_from_dict(d: Mapping) -> Tuple[World, BodyConfig]:
    _check_keys(d, ("bounds", "walls", "lights", "body"), "world.")
    bounds = d.get("bounds")
    if bounds is not None:
        if not (isinstance(bounds, list) and len(bounds) == 4):
            raise ConfigError("'world.bounds' must be [xmin, ymin, xmax, ymax] or null")
        bounds = tuple(_num(b, "world.bounds") for b in bounds)
    walls = []
    for k, w in enumerate(d.get("walls", [])):
        if not (isinstance(w, list) and len(w) == 2):
            raise ConfigError(f"'world.walls[{k}]' must be [[x, y], [x, y]]")
        walls.append((_point(w[0], f"world.walls[{k}]"), _point(w[1], f"world.walls[{k}]")))
    lights = []
    for k, light in enumerate(d.get("lights", [])):
        where = f"world.lights[{k}]."
        _check_keys(light, ("center", "radius"), where)
        lights.append(Light(_point(_require(light, "center", where), where + "center"),
                            _num(_require(light, "radius", where), where + "radius", positive=True)))
    try:
        world = World(bounds, tuple(walls), tuple(lights))
    except ValueError as exc:
        raise ConfigError(f"world: {exc}") from None
    return world, BodyConfig.from_dict(d.get("body", {}))


def _world_to_dict(world: World, body: BodyConfig) -> Dict:
    return {
        "bounds": None if world.bounds is None else list(world.bounds),
        "walls": [[_pt(a), _pt(b)] for a, b in world.walls],
        "lights": [{"center": _pt(l.center), "radius": l.radius} for l in world.lights],
        "body": body.to_dict(),
    }


_BEHAVIOR_KEYS = ("kind", "p0", "H", "delta", "goal", "consensus_radius", "cruise_speed",
                  "speed_gain", "wall_standoff", "wall_mode")


def _behavior_from_dict(d: Mapping, where: str, tick_duration: float) -> BehaviorSpec:
    _check_keys(d, _BEHAVIOR_KEYS, where)
    kind = _require(d, "kind", where)
    try:
        kind = BehaviorKind(kind)
    except ValueError:
        raise ConfigError(f"'{where}kind' must be one of {[k.value for k in BehaviorKind]}") from None
    goal = d.get("goal")
    if isinstance(goal, dict):
        _check_keys(goal, ("leader",), where + "goal.")
        goal = _int(_require(goal, "leader", where + "goal."), where + "goal.leader", minimum=0)
    elif goal is not None:
        goal = _point(goal, where + "goal")
    delta = _num(d.get("delta", 1.0), where + "delta", positive=True)
    H = d.get("H", 0)
    if H not in (0, 1) or isinstance(H, bool):
        raise ConfigError(f"'{where}H' must be 0 or 1")
    radius = d.get("consensus_radius")
    try:
        return BehaviorSpec(
            kind=kind,
            p0=_num(d.get("p0", 1.0), where + "p0", positive=True),
            H=H,
            delta=delta,
            goal=goal,
            consensus_radius=None if radius is None else _num(radius, where + "consensus_radius", positive=True),
            cruise_speed=_num(d.get("cruise_speed", 0.1), where + "cruise_speed", nonneg=True),
            speed_gain=_num(d.get("speed_gain", delta / tick_duration), where + "speed_gain", nonneg=True),
            wall_standoff=_num(d.get("wall_standoff", 0.3), where + "wall_standoff", nonneg=True),
            wall_mode=d.get("wall_mode", "stop"),
        )
    except ValueError as exc:
        raise ConfigError(f"{where.rstrip('.')}: {exc}") from None


def _behavior_to_dict(b: BehaviorSpec) -> Dict:
    if isinstance(b.goal, Vec2):
        goal = _pt(b.goal)
    elif b.goal is None:
        goal = None
    else:
        goal = {"leader": b.goal}
    return {
        "kind": b.kind.value, "p0": b.p0, "H": b.H, "delta": b.delta, "goal": goal,
        "consensus_radius": b.consensus_radius, "cruise_speed": b.cruise_speed,
        "speed_gain": b.speed_gain, "wall_standoff": b.wall_standoff, "wall_mode": b.wall_mode,
    }


@dataclass(frozen=True)
class Script:
    """Waypoints driven at a fixed speed, ignoring the swarm (a piloted leader)."""

    waypoints: Tuple[Vec2, ...]
    speed: float

    def length(self, start: Optional[Vec2] = None) -> float:
        pts = ([start] if start is not None else []) + list(self.waypoints)
        return sum(a.distance(b) for a, b in zip(pts, pts[1:]))


@dataclass(frozen=True)
class AgentOverride:
    ids: Tuple[int, ...]
    behavior: Optional[Dict] = None
    position: Optional[Vec2] = None
    heading_deg: Optional[float] = None
    frozen: bool = False
    leader: bool = False
    script: Optional[Script] = None

    def to_dict(self) -> Dict:
        d: Dict[str, Any] = {"ids": list(self.ids)}
        if self.behavior is not None:
            d["behavior"] = copy.deepcopy(self.behavior)
        if self.position is not None:
            d["position"] = _pt(self.position)
        if self.heading_deg is not None:
            d["heading_deg"] = self.heading_deg
        if self.frozen:
            d["frozen"] = True
        if self.leader:
            d["leader"] = True
        if self.script is not None:
            d["script"] = {"waypoints": [_pt(w) for w in self.script.waypoints], "speed": self.script.speed}
        return d


@dataclass(frozen=True)
class Event:
    tick: int
    type: str
    ids: Tuple[int, ...] = ()
    heading_deg: Optional[float] = None
    p0: Optional[float] = None
    delta: Optional[float] = None
    comm_range: Optional[float] = None

    def __post_init__(self):
        if self.type not in EVENT_TYPES:
            raise ValueError(f"unknown event type {self.type!r}")
        if self.tick < 0:
            raise ValueError("event tick must be non-negative")

    @classmethod
    def from_dict(cls, d: Mapping, where: str) -> "Event":
        _check_keys(d, ("tick", "type", "id", "ids", "heading_deg", "p0", "delta", "comm_range"), where)
        etype = _require(d, "type", where)
        if etype not in EVENT_TYPES:
            raise ConfigError(f"'{where}type' must be one of {list(EVENT_TYPES)}")
        if "id" in d and "ids" in d:
            raise ConfigError(f"'{where}' takes either 'id' or 'ids'")
        ids = [d["id"]] if "id" in d else list(d.get("ids", []))
        ids = tuple(_int(i, where + "id", minimum=0) for i in ids)
        if etype in ("remove_agent", "set_leader", "degrade_agent") and not ids:
            raise ConfigError(f"missing key '{where}id'")
        opt = lambda k, **kw: None if d.get(k) is None else _num(d[k], where + k, **kw)
        ev = cls(_int(_require(d, "tick", where), where + "tick", minimum=0), etype, ids,
                 opt("heading_deg"), opt("p0", positive=True), opt("delta", positive=True),
                 opt("comm_range", positive=True))
        if etype == "set_p0" and ev.p0 is None:
            raise ConfigError(f"missing key '{where}p0'")
        if etype == "set_comm_range" and ev.comm_range is None:
            raise ConfigError(f"missing key '{where}comm_range'")
        return ev

    def to_dict(self) -> Dict:
        d: Dict[str, Any] = {"tick": self.tick, "type": self.type}
        if self.ids:
            d["ids"] = list(self.ids)
        for k in ("heading_deg", "p0", "delta", "comm_range"):
            if getattr(self, k) is not None:
                d[k] = getattr(self, k)
        return d


@dataclass(frozen=True)
class RunConfig:
    max_ticks: int = 500
    tick_duration: float = 0.5
    termination: str = "auto"
    verbose_net: bool = False


@dataclass
class ScenarioConfig:
    seed: int
    world: World
    body: BodyConfig
    n_agents: int
    placement: Dict
    initial_heading: Dict
    behavior: BehaviorSpec
    overrides: Tuple[AgentOverride, ...]
    network: NetworkModel
    run: RunConfig
    events: Tuple[Event, ...] = ()
    behavior_raw: Dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def max_ticks(self) -> int:
        return self.run.max_ticks

    @property
    def tick_duration(self) -> float:
        return self.run.tick_duration

    @property
    def agent_ids(self) -> range:
        return range(self.n_agents)

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return dataclasses.replace(self, seed=int(seed))

    def override_for(self, agent_id: int) -> List[AgentOverride]:
        return [o for o in self.overrides if agent_id in o.ids]

    @property
    def behaviors(self) -> Dict[int, BehaviorSpec]:
        """Exactly one behaviour per agent: the default merged with any overrides."""
        out = {}
        base = _behavior_to_dict(self.behavior)
        for i in self.agent_ids:
            merged = dict(base)
            for o in self.override_for(i):
                if o.behavior:
                    merged.update(o.behavior)
                    if "delta" in o.behavior and "speed_gain" not in o.behavior:
                        merged["speed_gain"] = merged["delta"] / self.run.tick_duration
            out[i] = _behavior_from_dict(merged, f"agents[{i}].behavior.", self.run.tick_duration)
        return out

    def to_dict(self) -> Dict:
        net = self.network
        return {
            "seed": self.seed,
            "world": _world_to_dict(self.world, self.body),
            "agents": {
                "count": self.n_agents,
                "placement": copy.deepcopy(self.placement),
                "heading": copy.deepcopy(self.initial_heading),
                "behavior": _behavior_to_dict(self.behavior),
                "overrides": [o.to_dict() for o in self.overrides],
            },
            "network": {
                "comm_range": net.comm_range,
                "loss": "on" if net.loss else "off",
                "relay": net.relay,
                "ttl": net.ttl,
                "staleness": net.staleness,
                "loss_table": [{"n": r.n, "r0": r.mean_nn_distance, "points": [list(p) for p in r.points]}
                               for r in net.loss_table],
            },
            "run": {
                "max_ticks": self.run.max_ticks,
                "tick_duration": self.run.tick_duration,
                "termination": self.run.termination,
                "verbose_net": self.run.verbose_net,
            },
            "events": [e.to_dict() for e in self.events],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def config_hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _placement_from_dict(d: Mapping, n: int) -> Dict:
    where = "agents.placement."
    kind = _require(d, "kind", where)
    if kind not in PLACEMENTS:
        raise ConfigError(f"'{where}kind' must be one of {list(PLACEMENTS)}")
    out: Dict[str, Any] = {"kind": kind}
    if kind == "box":
        _check_keys(d, ("kind", "box", "min_separation"), where)
        box = _require(d, "box", where)
        if not (isinstance(box, list) and len(box) == 4) or not (box[2] > box[0] and box[3] > box[1]):
            raise ConfigError(f"'{where}box' must be [xmin, ymin, xmax, ymax]")
        out["box"] = [_num(b, where + "box") for b in box]
        out["min_separation"] = _num(d.get("min_separation", 0.0), where + "min_separation", nonneg=True)
    elif kind == "disc":
        _check_keys(d, ("kind", "center", "radius", "min_separation"), where)
        out["center"] = _pt(_point(_require(d, "center", where), where + "center"))
        out["radius"] = _num(_require(d, "radius", where), where + "radius", positive=True)
        out["min_separation"] = _num(d.get("min_separation", 0.0), where + "min_separation", nonneg=True)
    elif kind == "grid":
        _check_keys(d, ("kind", "origin", "spacing", "columns", "jitter"), where)
        out["origin"] = _pt(_point(d.get("origin", [0.0, 0.0]), where + "origin"))
        out["spacing"] = _num(_require(d, "spacing", where), where + "spacing", positive=True)
        out["columns"] = _int(_require(d, "columns", where), where + "columns", minimum=1)
        out["jitter"] = _num(d.get("jitter", 0.0), where + "jitter", nonneg=True)
    else:
        _check_keys(d, ("kind", "positions"), where)
        pts = _require(d, "positions", where)
        if not isinstance(pts, list) or len(pts) < n:
            raise ConfigError(f"'{where}positions' needs at least {n} points")
        out["positions"] = [_pt(_point(p, where + "positions")) for p in pts]
    return out


def _heading_from_dict(d: Mapping) -> Dict:
    where = "agents.heading."
    kind = d.get("kind", "random")
    if kind == "random":
        _check_keys(d, ("kind",), where)
        return {"kind": "random"}
    if kind == "fixed":
        _check_keys(d, ("kind", "angle_deg"), where)
        return {"kind": "fixed", "angle_deg": _num(_require(d, "angle_deg", where), where + "angle_deg")}
    raise ConfigError(f"'{where}kind' must be random or fixed")


def _override_from_dict(d: Mapping, k: int, n: int) -> AgentOverride:
    where = f"agents.overrides[{k}]."
    _check_keys(d, ("ids", "behavior", "position", "heading_deg", "frozen", "leader", "script"), where)
    ids = tuple(_int(i, where + "ids", minimum=0) for i in _require(d, "ids", where))
    for i in ids:
        if i >= n:
            raise ConfigError(f"'{where}ids' refers to unknown agent {i}")
    behavior = d.get("behavior")
    if behavior is not None:
        _check_keys(behavior, _BEHAVIOR_KEYS, where + "behavior.")
    script = d.get("script")
    if script is not None:
        _check_keys(script, ("waypoints", "speed"), where + "script.")
        wps = tuple(_point(w, where + "script.waypoints") for w in _require(script, "waypoints", where + "script."))
        if not wps:
            raise ConfigError(f"'{where}script.waypoints' must not be empty")
        script = Script(wps, _num(_require(script, "speed", where + "script."), where + "script.speed", positive=True))
    return AgentOverride(
        ids=ids,
        behavior=copy.deepcopy(behavior),
        position=None if d.get("position") is None else _point(d["position"], where + "position"),
        heading_deg=None if d.get("heading_deg") is None else _num(d["heading_deg"], where + "heading_deg"),
        frozen=_bool(d.get("frozen", False), where + "frozen"),
        leader=_bool(d.get("leader", False), where + "leader"),
        script=script,
    )


def _network_from_dict(d: Mapping) -> NetworkModel:
    where = "network."
    _check_keys(d, ("comm_range", "loss", "relay", "ttl", "staleness", "loss_table"), where)
    loss = d.get("loss", "on")
    if loss not in ("on", "off"):
        raise ConfigError(f"'{where}loss' must be 'on' or 'off'")
    table = FIELD_LOSS_TABLE
    if d.get("loss_table") is not None:
        rows = []
        for k, r in enumerate(d["loss_table"]):
            rw = f"{where}loss_table[{k}]."
            _check_keys(r, ("n", "r0", "points"), rw)
            try:
                rows.append(LossRow(_int(_require(r, "n", rw), rw + "n", minimum=1),
                                    _num(r.get("r0", 0.0), rw + "r0", nonneg=True),
                                    tuple(tuple(p) for p in _require(r, "points", rw))))
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"{rw.rstrip('.')}: {exc}") from None
        table = tuple(rows)
    if loss == "on" and not table:
        raise ConfigError(f"'{where}loss_table' is empty but loss is on")
    return NetworkModel(
        comm_range=_num(d.get("comm_range", 310.0), where + "comm_range", positive=True),
        loss_table=table,
        loss=loss == "on",
        relay=_bool(d.get("relay", False), where + "relay"),
        ttl=_int(d.get("ttl", 3), where + "ttl", minimum=0),
        staleness=_int(d.get("staleness", 5), where + "staleness", minimum=0),
    )


def from_dict(doc: Mapping) -> ScenarioConfig:
    """Validate a scenario document and build the config (strict)."""
    _check_keys(doc, ("seed", "world", "agents", "network", "run", "events"), "")
    for key in ("seed", "world", "agents", "network", "run"):
        _require(doc, key, "")
    seed = _int(doc["seed"], "seed")
    if not -(1 << 63) <= seed < (1 << 64):
        raise ConfigError("'seed' must fit in 64 bits")

    run = doc["run"]
    _check_keys(run, ("max_ticks", "tick_duration", "termination", "verbose_net"), "run.")
    termination = run.get("termination", "auto")
    if termination not in TERMINATIONS:
        raise ConfigError(f"'run.termination' must be one of {list(TERMINATIONS)}")
    run_cfg = RunConfig(
        max_ticks=_int(_require(run, "max_ticks", "run."), "run.max_ticks", minimum=1),
        tick_duration=_num(run.get("tick_duration", 0.5), "run.tick_duration", positive=True),
        termination=termination,
        verbose_net=_bool(run.get("verbose_net", False), "run.verbose_net"),
    )

    world, body = _world_from_dict(doc["world"])

    agents = doc["agents"]
    _check_keys(agents, ("count", "placement", "heading", "behavior", "overrides"), "agents.")
    n = _int(_require(agents, "count", "agents."), "agents.count", minimum=1)
    placement = _placement_from_dict(_require(agents, "placement", "agents."), n)
    heading = _heading_from_dict(agents.get("heading", {}))
    behavior_raw = _require(agents, "behavior", "agents.")
    behavior = _behavior_from_dict(behavior_raw, "agents.behavior.", run_cfg.tick_duration)
    overrides = tuple(_override_from_dict(o, k, n) for k, o in enumerate(agents.get("overrides", [])))

    events = []
    for k, e in enumerate(doc.get("events", [])):
        ev = Event.from_dict(e, f"events[{k}].")
        if ev.tick >= run_cfg.max_ticks:
            raise ConfigError(f"'events[{k}].tick' is beyond run.max_ticks")
        for i in ev.ids:
            if i >= n:
                raise ConfigError(f"'events[{k}]' refers to unknown agent {i}")
        events.append(ev)

    cfg = ScenarioConfig(
        seed=seed, world=world, body=body, n_agents=n, placement=placement,
        initial_heading=heading, behavior=behavior, overrides=overrides,
        network=_network_from_dict(doc["network"]), run=run_cfg,
        events=tuple(sorted(events, key=lambda e: e.tick)),
        behavior_raw=copy.deepcopy(behavior_raw),
    )
    for i, spec in cfg.behaviors.items():  # surfaces per-agent errors now, not mid-run
        if isinstance(spec.goal, int) and spec.goal >= n:
            raise ConfigError(f"agent {i} follows unknown leader {spec.goal}")
    return cfg


def _coerce(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


_ALIASES = {"n_agents": "agents.count", "seed": "seed", "max_ticks": "run.max_ticks",
            "tick_duration": "run.tick_duration"}


def apply_overrides(doc: Dict, overrides) -> Dict:
    """Apply ``key=value`` strings (dotted paths, JSON values) to a raw document."""
    doc = copy.deepcopy(doc)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, value = item.split("=", 1)
        path = _ALIASES.get(key.strip(), key.strip()).split(".")
        node = doc
        for part in path[:-1]:
            if not isinstance(node, dict) or part not in node:
                raise ConfigError(f"override path '{key}' does not exist")
            node = node[part]
        if not isinstance(node, dict):
            raise ConfigError(f"override path '{key}' does not exist")
        node[path[-1]] = _coerce(value)
    return doc


def load(path, overrides=(), env: Optional[Mapping[str, str]] = None) -> ScenarioConfig:
    """Read a scenario file, apply overrides and the ``SWARMKIT_SEED`` variable."""
    text = Path(path).read_text()  # OSError is left to the caller
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return from_document(doc, overrides, env)


def from_document(doc: Mapping, overrides=(), env: Optional[Mapping[str, str]] = None) -> ScenarioConfig:
    doc = apply_overrides(dict(doc), overrides)
    env = os.environ if env is None else env
    if env.get(SEED_ENV):
        try:
            doc["seed"] = int(env[SEED_ENV])
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer") from None
    return from_dict(doc)


def save(config: ScenarioConfig, path) -> None:
    Path(path).write_text(config.to_json())


def bundled_names() -> List[str]:
    files = resources.files("swarmkit") / "scenarios"
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def bundled_path(name: str) -> Path:
    name = name if name.endswith(".json") else name + ".json"
    return Path(str(resources.files("swarmkit") / "scenarios" / name))


def load_bundled(name: str, overrides=(), env: Optional[Mapping[str, str]] = None) -> ScenarioConfig:
    return load(bundled_path(name), overrides, env if env is not None else {})
