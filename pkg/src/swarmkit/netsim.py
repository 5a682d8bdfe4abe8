"""Simulated metric-range broadcast mesh with distance/density dependent loss.

Agents talk to the mesh only through a :class:`Port` (``broadcast`` and
``receive``), which is the same two-call surface a real radio adapter has to
offer.  Frames on the simulated air are the bytes produced by
:mod:`swarmkit.codec`.
"""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from . import codec
from .core import AgentState, SwarmError, Vec2

log = logging.getLogger(__name__)


class EmptyModel(SwarmError):
    """Loss is enabled but the loss table has no rows."""


@dataclass(frozen=True)
class LossRow:
    """Measured success rate versus distance for one swarm size ``n``."""

    n: int
    mean_nn_distance: float
    points: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(d), float(p)) for d, p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("loss row needs at least one point")
        ds = [d for d, _ in pts]
        ps = [p for _, p in pts]
        if any(b <= a for a, b in zip(ds, ds[1:])):
            raise ValueError("loss row distances must be strictly increasing")
        if any(not 0.0 <= p <= 1.0 for p in ps):
            raise ValueError("success probabilities must lie in [0, 1]")
        if any(b > a for a, b in zip(ps, ps[1:])):
            raise ValueError("success probability must not increase with distance")

    @property
    def distances(self) -> Tuple[float, ...]:
        return tuple(d for d, _ in self.points)

    @property
    def probabilities(self) -> Tuple[float, ...]:
        return tuple(p for _, p in self.points)

    def at(self, distance: float) -> float:
        ds, ps = self.distances, self.probabilities
        if distance <= ds[0]:
            return ps[0]
        if distance >= ds[-1]:
            return ps[-1]
        i = bisect.bisect_right(ds, distance)
        t = (distance - ds[i - 1]) / (ds[i] - ds[i - 1])
        return ps[i - 1] + t * (ps[i] - ps[i - 1])


# buoy field measurements: (swarm size, mean nearest-neighbour distance m) -> (distance m, success)
FIELD_LOSS_TABLE = (
    LossRow(20, 19.5, ((10, 0.96), (40, 0.91), (80, 0.88), (120, 0.84))),
    LossRow(40, 6.9, ((10, 0.89), (40, 0.86), (80, 0.81), (160, 0.66))),
)


@dataclass(frozen=True)
class NetworkModel:
    comm_range: float = 310.0
    loss_table: Tuple[LossRow, ...] = FIELD_LOSS_TABLE
    loss: bool = True
    relay: bool = False
    ttl: int = 3
    staleness: int = 5

    def __post_init__(self):
        object.__setattr__(self, "loss_table", tuple(self.loss_table))
        if not self.comm_range > 0:
            raise ValueError("comm_range must be positive")
        if self.ttl < 0:
            raise ValueError("ttl must be non-negative")
        if self.staleness < 0:
            raise ValueError("staleness must be non-negative")

    def row_for(self, n: int) -> LossRow:
        if not self.loss_table:
            raise EmptyModel("loss enabled with an empty loss table")
        # ties go to the smaller swarm size
        return min(self.loss_table, key=lambda r: (abs(r.n - n), r.n))


def success_probability(model: NetworkModel, distance: float, n: int) -> float:
    """Chance that a broadcast over ``distance`` metres arrives in a swarm of ``n``."""
    if distance < 0:
        raise ValueError("distance must be non-negative")
    if distance > model.comm_range:
        return 0.0
    if not model.loss:
        return 1.0
    return model.row_for(n).at(distance)


@dataclass(frozen=True, slots=True)
class Message:
    sender: int
    payload: AgentState
    sent_tick: int

    def __post_init__(self):
        if self.payload.id != self.sender:
            raise ValueError("agents only broadcast their own state")


@dataclass(frozen=True, slots=True)
class PairOutcome:
    tick: int
    sender: int
    receiver: int
    distance: float
    delivered: bool


@dataclass
class _Airborne:
    frame: bytes
    origin: int
    sent_tick: int
    transmitter: int
    hops_left: int


@dataclass
class DeliveryReport:
    tick: int
    sent: int = 0
    delivered: int = 0
    dropped_frames: int = 0
    outcomes: List[PairOutcome] = field(default_factory=list)


class Mesh:
    """One shared mailbox system, advanced once per tick by the engine.

    ``broadcast`` only queues; ``deliver`` resolves everything queued since the
    previous call against the current positions, so every message arrives one
    tick after it was sent.
    """

    def __init__(self, model: NetworkModel, rng: Optional[np.random.Generator] = None,
                 verbose: bool = False):
        self.model = model
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.verbose = verbose
        self._queue: List[_Airborne] = []
        self._queued_keys = set()
        self._inboxes: Dict[int, List[Message]] = {}
        self._relayed = set()
        self._sent_this_tick = 0
        if model.loss:
            model.row_for(1)  # fail early on an empty table

    def port(self, agent_id: int) -> "Port":
        return Port(self, agent_id)

    def broadcast(self, agent_id: int, state: AgentState) -> None:
        if state.id != agent_id:
            raise ValueError("agents only broadcast their own state")
        key = (agent_id, state.tick)
        if key in self._queued_keys:
            raise ValueError(f"agent {agent_id} already broadcast in tick {state.tick}")
        self._queued_keys.add(key)
        self._sent_this_tick += 1
        hops = self.model.ttl if self.model.relay else 0
        self._queue.append(_Airborne(codec.encode(state), agent_id, state.tick, agent_id, hops))

    def inject_frame(self, transmitter: int, frame: bytes, sent_tick: int) -> None:
        """Put raw bytes on the air (used to exercise corrupted-frame handling)."""
        self._queue.append(_Airborne(bytes(frame), transmitter, sent_tick, transmitter, 0))

    def _probabilities(self, distances: np.ndarray, n: int) -> np.ndarray:
        if self.model.loss:
            row = self.model.row_for(n)
            p = np.interp(distances, row.distances, row.probabilities)
        else:
            p = np.ones_like(distances)
        p[distances > self.model.comm_range] = 0.0
        return p

    def deliver(self, tick: int, positions: Mapping[int, Vec2], swarm_size: Optional[int] = None) -> DeliveryReport:
        """Resolve queued frames; ``positions`` lists the agents still on the air."""
        report = DeliveryReport(tick, sent=self._sent_this_tick)
        self._sent_this_tick = 0
        queue = sorted(self._queue, key=lambda a: (a.transmitter, a.origin, a.sent_tick, a.hops_left))
        self._queue = []
        self._queued_keys = set()
        n = len(positions) if swarm_size is None else swarm_size
        ids = sorted(positions)
        xy = np.array([[positions[i].x, positions[i].y] for i in ids], dtype=float).reshape(-1, 2)
        index = {aid: k for k, aid in enumerate(ids)}
        inbox: Dict[int, Dict[int, Message]] = {aid: {} for aid in ids}
        decoded: Dict[bytes, AgentState] = {}
        for item in queue:
            if item.transmitter not in index:
                continue
            state = decoded.get(item.frame)
            if state is None:
                try:
                    state = codec.decode(item.frame)
                except codec.FrameError as exc:
                    log.info("tick %d: dropped frame from %d: %s", tick, item.transmitter, exc)
                    report.dropped_frames += 1
                    continue
                decoded[item.frame] = state
            origin = state.id
            mask = np.ones(len(ids), dtype=bool)
            mask[index[item.transmitter]] = False
            if origin in index:
                mask[index[origin]] = False
            cand = np.flatnonzero(mask)
            if cand.size == 0:
                continue
            d = np.hypot(*(xy[cand] - xy[index[item.transmitter]]).T)
            p = self._probabilities(d, n)
            ok = self.rng.random(cand.size) < p if self.model.loss else p > 0
            msg = Message(origin, state, state.tick)
            for k, r_idx in enumerate(cand):
                rid = ids[r_idx]
                if self.verbose and item.transmitter == origin:
                    report.outcomes.append(PairOutcome(tick, origin, rid, float(d[k]), bool(ok[k])))
                if not ok[k]:
                    continue
                report.delivered += 1
                prev = inbox[rid].get(origin)
                if prev is None or prev.sent_tick < msg.sent_tick:
                    inbox[rid][origin] = msg
                if item.hops_left > 0 and (rid, origin, state.tick) not in self._relayed:
                    self._relayed.add((rid, origin, state.tick))
                    self._queue.append(_Airborne(item.frame, origin, state.tick, rid, item.hops_left - 1))
        self._inboxes = {aid: [box[s] for s in sorted(box)] for aid, box in inbox.items()}
        # relay bookkeeping only needs to outlive the hop limit
        horizon = tick - self.model.ttl - 2
        self._relayed = {k for k in self._relayed if k[2] >= horizon}
        return report

    def receive(self, agent_id: int) -> List[Message]:
        return list(self._inboxes.get(agent_id, ()))


class Port:
    """The per-agent network adapter: broadcast own state, read what arrived."""

    __slots__ = ("mesh", "agent_id")

    def __init__(self, mesh: Mesh, agent_id: int):
        self.mesh = mesh
        self.agent_id = agent_id

    def broadcast(self, state: AgentState) -> None:
        self.mesh.broadcast(self.agent_id, state)

    def receive(self) -> List[Message]:
        return self.mesh.receive(self.agent_id)
