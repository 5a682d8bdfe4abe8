"""Synchronous per-tick scheduler.

Each tick runs the same five phases for every agent:

1. deliver the frames queued last tick into each agent's neighbour table,
2. sense (body),
3. compute a motion command (behaviour) from the table and the reading,
4. broadcast the agent's state (network),
5. step the body.

An agent only ever sees other agents through phase 1, so the simulation is
decentralised by construction.
"""

from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import metrics
from .behaviors import (
    NO_GOAL_YET,
    MotionCommand,
    NeighborView,
    consensus_step,
    exploration_step,
    leader_follower_goal,
    perimeter_step,
    search_and_explore_step,
)
from .bodysim import Pose, SensorReading, SimBody
from .core import (
    DEGRADED,
    LEADER,
    AgentState,
    BehaviorKind,
    BehaviorSpec,
    Heading,
    SwarmError,
    Vec2,
    normalize,
    seeded_rng,
)
from .netsim import Mesh, PairOutcome, Port
from .scenario import Event, ScenarioConfig, Script

log = logging.getLogger(__name__)

CONSENSUS_SPREAD = 1e-3
CONSENSUS_HOLD = 20
REACH_FACTOR = 3.0


class UnknownAgent(SwarmError, KeyError):
    pass


class Termination(str, enum.Enum):
    MAX_TICKS = "MaxTicks"
    ALL_REACHED_TARGET = "AllReachedTarget"
    CONSENSUS_REACHED = "ConsensusReached"


@dataclass(frozen=True, slots=True)
class AgentRecord:
    id: int
    position: Vec2
    heading: Heading
    sensed_position: Vec2
    sensed_heading: Heading
    command: Optional[MotionCommand]
    speed: float
    phase: str
    target_found: Optional[Vec2]
    removed: bool = False


@dataclass(frozen=True)
class StepRecord:
    """Everything that happened in one tick; poses are taken before the body step."""

    tick: int
    agents: Tuple[AgentRecord, ...]
    sent: int
    delivered: int
    outcomes: Optional[Tuple[PairOutcome, ...]] = None

    @property
    def active(self) -> Tuple[AgentRecord, ...]:
        return tuple(a for a in self.agents if not a.removed)

    def agent(self, agent_id: int) -> AgentRecord:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise UnknownAgent(agent_id)


@dataclass
class RunResult:
    records: List[StepRecord]
    termination: Termination
    summary: Dict
    config: ScenarioConfig

    @property
    def ticks(self) -> int:
        return len(self.records)

    def trajectory(self, agent_id: int) -> List[Vec2]:
        return [r.agent(agent_id).position for r in self.records]


@dataclass
class _Agent:
    id: int
    spec: BehaviorSpec
    body: SimBody
    port: Port
    table: Dict[int, Tuple[AgentState, int]] = field(default_factory=dict)
    target_found: Optional[Vec2] = None
    flags: set = field(default_factory=set)
    pinned: Optional[Heading] = None
    last_goal: Optional[Vec2] = None
    script: Optional[Script] = None
    waypoint: int = 0
    removed: bool = False
    speed: float = 0.0
    # per-tick scratch
    view: Optional[NeighborView] = None
    reading: Optional[SensorReading] = None
    state: Optional[AgentState] = None
    command: Optional[MotionCommand] = None
    phase: str = ""


def _circle_positions(rng, n, center, radius, min_sep):
    pts = []
    tries = 0
    while len(pts) < n:
        r = radius * math.sqrt(rng.random())
        a = rng.random() * 2 * math.pi
        p = Vec2(center[0] + r * math.cos(a), center[1] + r * math.sin(a))
        tries += 1
        if tries > 100000 or all(p.distance(q) >= min_sep for q in pts):
            pts.append(p)
    return pts


def initial_poses(config: ScenarioConfig) -> Dict[int, Pose]:
    """Seeded initial placement (``init`` stream) plus per-agent overrides."""
    rng = seeded_rng(config.seed, "init")
    pl = config.placement
    n = config.n_agents
    kind = pl["kind"]
    if kind == "box":
        xmin, ymin, xmax, ymax = pl["box"]
        pts: List[Vec2] = []
        tries = 0
        while len(pts) < n:
            p = Vec2(xmin + (xmax - xmin) * rng.random(), ymin + (ymax - ymin) * rng.random())
            tries += 1
            if tries > 100000 or all(p.distance(q) >= pl["min_separation"] for q in pts):
                pts.append(p)
    elif kind == "disc":
        pts = _circle_positions(rng, n, pl["center"], pl["radius"], pl["min_separation"])
    elif kind == "grid":
        ox, oy = pl["origin"]
        cols, sp, jit = pl["columns"], pl["spacing"], pl["jitter"]
        pts = []
        for i in range(n):
            jx, jy = (rng.uniform(-jit, jit, 2) if jit else (0.0, 0.0))
            pts.append(Vec2(float(ox + (i % cols) * sp + jx), float(oy + (i // cols) * sp + jy)))
    else:
        pts = [Vec2(*p) for p in pl["positions"][:n]]

    if config.initial_heading["kind"] == "random":
        headings = [Heading.from_angle(float(a)) for a in rng.uniform(-math.pi, math.pi, n)]
    else:
        headings = [Heading.from_angle(math.radians(config.initial_heading["angle_deg"]))] * n

    poses = {}
    for i in range(n):
        pos, head = pts[i], headings[i]
        for o in config.override_for(i):
            if o.position is not None:
                pos = o.position
            if o.heading_deg is not None:
                head = Heading.from_angle(math.radians(o.heading_deg))
        poses[i] = Pose(pos, head)
    return poses


def _phase_name(spec: BehaviorSpec, target_found) -> str:
    if spec.kind is BehaviorKind.SEARCH_AND_EXPLORE:
        return "search" if target_found is None else "rendezvous"
    return spec.kind.value


class Engine:
    """Runs one scenario.  Single caller; build a new engine per run.

    ``order_seed`` evaluates agents in a freshly shuffled order every tick
    (outputs must not change); ``workers`` > 1 evaluates the per-agent phases
    on a thread pool; ``isolate`` discards every frame delivered to the listed
    agents.
    """

    def __init__(self, config: ScenarioConfig, *, workers: int = 1, order_seed: Optional[int] = None,
                 isolate: Sequence[int] = (), verbose_net: Optional[bool] = None):
        self.config = config
        self.dt = config.tick_duration
        verbose = config.run.verbose_net if verbose_net is None else verbose_net
        self.mesh = Mesh(config.network, seeded_rng(config.seed, "net"), verbose=verbose)
        self.workers = workers
        self._order_rng = None if order_seed is None else np.random.default_rng(order_seed)
        self.isolate = frozenset(isolate)
        self.tick = 0
        self.records: List[StepRecord] = []
        self._events: Dict[int, List[Event]] = {}
        self._last_event_tick = -1
        for ev in config.events:
            self.inject_event(ev.tick, ev)

        poses = initial_poses(config)
        sensors = config.body.sensors
        self.agents: Dict[int, _Agent] = {}
        for i, spec in config.behaviors.items():
            body = SimBody(config.body.kind, poses[i], config.world, sensors,
                           rng=seeded_rng(config.seed, f"sense/{i}"))
            agent = _Agent(i, spec, body, self.mesh.port(i))
            for o in config.override_for(i):
                body.frozen = body.frozen or o.frozen
                if o.leader:
                    agent.flags.add(LEADER)
                if o.script is not None:
                    agent.script = o.script
                    agent.flags.add(LEADER)
            self.agents[i] = agent
        self._pool = ThreadPoolExecutor(workers) if workers > 1 else None
        self._consensus_run = 0

    # -- events -------------------------------------------------------------

    def inject_event(self, tick: int, event: Event) -> None:
        """Schedule ``event`` for the start of ``tick``."""
        if not 0 <= tick < self.config.max_ticks:
            raise ValueError(f"tick {tick} outside the run horizon")
        for i in event.ids:
            if not 0 <= i < self.config.n_agents:
                raise UnknownAgent(f"no agent with id {i}")
        if event.tick != tick:
            event = replace(event, tick=tick)
        self._events.setdefault(tick, []).append(event)
        self._last_event_tick = max(self._last_event_tick, tick)

    def _apply(self, ev: Event) -> None:
        targets = [self.agents[i] for i in ev.ids] if ev.ids else list(self.agents.values())
        if ev.type == "remove_agent":
            for a in targets:
                a.removed = True
                a.body.frozen = True
        elif ev.type == "set_leader":
            for a in targets:
                a.flags.add(LEADER)
                a.pinned = (a.body.pose.heading if ev.heading_deg is None
                            else Heading.from_angle(math.radians(ev.heading_deg)))
        elif ev.type == "degrade_agent":
            for a in targets:
                a.flags.add(DEGRADED)
                a.body.degraded = True
        elif ev.type == "set_p0":
            for a in targets:
                changes = {"p0": ev.p0}
                if ev.delta is not None:
                    changes["delta"] = ev.delta
                    changes["speed_gain"] = ev.delta / self.dt
                a.spec = a.spec.with_(**changes)
        elif ev.type == "set_comm_range":
            self.mesh.model = replace(self.mesh.model, comm_range=ev.comm_range)
        log.debug("tick %d: applied %s", self.tick, ev)

    # -- phases -------------------------------------------------------------

    def _order(self, agents: List[_Agent]) -> List[_Agent]:
        if self._order_rng is None:
            return agents
        idx = self._order_rng.permutation(len(agents))
        return [agents[k] for k in idx]

    def _map(self, fn: Callable, agents: List[_Agent]) -> None:
        agents = self._order(agents)
        if self._pool is None:
            for a in agents:
                fn(a)
        else:
            list(self._pool.map(fn, agents))

    def _receive(self, a: _Agent) -> None:
        k = self.tick
        if a.id not in self.isolate:
            for m in a.port.receive():
                prev = a.table.get(m.sender)
                if prev is None or m.sent_tick >= prev[0].tick:
                    a.table[m.sender] = (m.payload, k)
        horizon = self.config.network.staleness
        fresh = [(s, k - t) for _, (s, t) in sorted(a.table.items()) if k - t <= horizon]
        a.view = NeighborView(a.id, fresh)

    def _sense(self, a: _Agent) -> None:
        a.reading = a.body.sense()

    def _scripted(self, a: _Agent, pos: Vec2) -> MotionCommand:
        script = a.script
        step = script.speed * self.dt
        while a.waypoint < len(script.waypoints) and pos.distance(script.waypoints[a.waypoint]) <= 1e-9:
            a.waypoint += 1
        if a.waypoint >= len(script.waypoints):
            return MotionCommand(a.body.pose.heading, 0.0)
        wp = script.waypoints[a.waypoint]
        d = pos.distance(wp)
        speed = script.speed if d >= step else d / self.dt
        if d <= step:
            a.waypoint += 1
        return MotionCommand(normalize(wp - pos), speed)

    def _decide(self, a: _Agent) -> None:
        reading = a.reading
        pose = reading.pose
        heading = a.pinned if a.pinned is not None else pose.heading
        cap = a.body.speed_cap
        state = AgentState(a.id, self.tick, pose.position, heading, min(a.speed, cap),
                           a.target_found, frozenset(a.flags))
        spec = a.spec
        try:
            if a.script is not None:
                # the piloted leader follows its script on true position
                cmd = self._scripted(a, a.body.pose.position)
                phase = "scripted"
            elif a.body.frozen:
                cmd = MotionCommand(heading, 0.0)
                phase = "frozen"
            elif spec.kind is BehaviorKind.CONSENSUS:
                cmd = consensus_step(state, a.view, spec)
                phase = spec.kind.value
            elif spec.kind is BehaviorKind.PERIMETER_DEFENSE:
                cmd = perimeter_step(state, a.view, spec, reading.obstacle_points)
                phase = spec.kind.value
            elif spec.kind is BehaviorKind.EXPLORATION:
                if isinstance(spec.goal, int):
                    goal = leader_follower_goal(spec.goal, a.view, a.last_goal)
                    if goal is NO_GOAL_YET:
                        spec = spec.with_(H=0, goal=None)
                    else:
                        a.last_goal = goal
                        spec = spec.with_(goal=goal)
                cmd = exploration_step(state, a.view, spec)
                phase = spec.kind.value
            else:
                cmd, state = search_and_explore_step(state, a.view, reading.light, spec,
                                                     reading.obstacle_points)
                a.target_found = state.target_found
                phase = _phase_name(spec, state.target_found)
        except SwarmError as exc:
            log.warning("tick %d agent %d: %s; holding still", self.tick, a.id, exc)
            cmd = MotionCommand(heading, 0.0)
            phase = "fault"
        if a.pinned is not None:
            cmd = MotionCommand(a.pinned, cmd.target_speed)
        a.command = cmd
        a.phase = phase
        a.speed = min(cmd.target_speed, cap)
        a.state = state.evolve(speed=a.speed)

    def _step(self, a: _Agent) -> None:
        a.body.step(a.command, self.dt)

    # -- loop ---------------------------------------------------------------

    def step(self) -> StepRecord:
        """Run one tick and return its record."""
        k = self.tick
        for ev in self._events.get(k, ()):
            self._apply(ev)
        active = [a for a in self.agents.values() if not a.removed]
        report = self.mesh.deliver(k, {a.id: a.body.pose.position for a in active})
        self._map(self._receive, active)
        self._map(self._sense, active)
        self._map(self._decide, active)
        for a in active:
            a.port.broadcast(a.state)
        pre = {a.id: a.body.pose for a in active}
        self._map(self._step, active)

        rows = []
        for a in self.agents.values():
            if a.removed:
                pose = a.body.pose
                rows.append(AgentRecord(a.id, pose.position, pose.heading, pose.position, pose.heading,
                                        None, 0.0, "removed", a.target_found, True))
                continue
            pose = pre[a.id]
            rows.append(AgentRecord(a.id, pose.position, pose.heading, a.reading.pose.position,
                                    a.reading.pose.heading, a.command, a.speed, a.phase, a.target_found))
        record = StepRecord(k, tuple(rows), report.sent, report.delivered,
                            tuple(report.outcomes) if self.mesh.verbose else None)
        self.records.append(record)
        self.tick += 1
        return record

    def _mode(self) -> str:
        mode = self.config.run.termination
        if mode != "auto":
            return mode
        kinds = {a.spec.kind for a in self.agents.values()}
        if kinds == {BehaviorKind.CONSENSUS}:
            return "consensus"
        if BehaviorKind.SEARCH_AND_EXPLORE in kinds:
            return "search"
        return "max_ticks"

    def _finished(self, record: StepRecord, mode: str) -> Optional[Termination]:
        if record.tick < self._last_event_tick:
            return None
        if mode == "consensus":
            spread = metrics.heading_spread([a.heading for a in record.active])
            self._consensus_run = self._consensus_run + 1 if spread < CONSENSUS_SPREAD else 0
            if self._consensus_run >= CONSENSUS_HOLD:
                return Termination.CONSENSUS_REACHED
        elif mode == "search":
            if all_reached_target(record, self.config):
                return Termination.ALL_REACHED_TARGET
        return None

    def run(self) -> RunResult:
        mode = self._mode()
        termination = Termination.MAX_TICKS
        try:
            while self.tick < self.config.max_ticks:
                record = self.step()
                done = self._finished(record, mode)
                if done is not None:
                    termination = done
                    break
        finally:
            if self._pool is not None:
                self._pool.shutdown()
        return RunResult(self.records, termination, metrics.summarize(self.records, self.config), self.config)


def reach_radius(config: ScenarioConfig) -> float:
    return REACH_FACTOR * config.behavior.p0


def all_reached_target(record: StepRecord, config: ScenarioConfig) -> bool:
    """Every active agent knows the target and is within 3*p0 of it."""
    active = record.active
    if not active:
        return False
    r = reach_radius(config)
    for a in active:
        if a.target_found is None or a.position.distance(a.target_found) > r:
            return False
    return True


def run(config: ScenarioConfig, **kwargs) -> RunResult:
    return Engine(config, **kwargs).run()


def inject_event(engine: Engine, tick: int, event: Event) -> None:
    engine.inject_event(tick, event)
