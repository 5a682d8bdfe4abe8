"""Cooperative control rules.

Every rule here is a pure function of the agent's own state, the states it
has heard from its neighbours and whatever its body sensed.  No rule reads
another agent directly; the engine is responsible for feeding in only what
came over the network.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

from .core import (
    ZERO_THRESHOLD,
    AgentState,
    BehaviorKind,
    BehaviorSpec,
    Heading,
    SwarmError,
    Vec2,
    ZeroVector,
    normalize,
)

COINCIDENT_TOL = 1e-9


class CoincidentAgents(SwarmError):
    """Two agents report the same position; the pairwise terms are undefined."""


class MissingGoal(SwarmError):
    """Goal seeking (H=1) was requested without a goal."""


class _NoGoalYet(enum.Enum):
    NO_GOAL_YET = "no-goal-yet"

    def __bool__(self):
        return False

    def __repr__(self):
        return "NO_GOAL_YET"


NO_GOAL_YET = _NoGoalYet.NO_GOAL_YET


@dataclass(frozen=True, slots=True)
class MotionCommand:
    target_heading: Heading
    target_speed: float

    def __post_init__(self):
        if not (self.target_speed >= 0.0 and math.isfinite(self.target_speed)):
            raise ValueError(f"invalid target speed {self.target_speed}")


class NeighborView:
    """The neighbour states available to one agent, each with its age in ticks.

    Entries older than the staleness horizon are dropped by whoever builds the
    view; here we only check that the owner does not appear in it.
    """

    __slots__ = ("owner", "entries")

    def __init__(self, owner: int, entries: Iterable[Tuple[AgentState, int]] = ()):
        entries = tuple(entries)
        for state, age in entries:
            if state.id == owner:
                raise ValueError(f"agent {owner} cannot be its own neighbour")
            if age < 0:
                raise ValueError("neighbour age must be non-negative")
        self.owner = owner
        self.entries = entries

    @classmethod
    def of(cls, owner: int, states: Iterable[AgentState]) -> "NeighborView":
        return cls(owner, ((s, 0) for s in states))

    @property
    def states(self) -> Tuple[AgentState, ...]:
        return tuple(s for s, _ in self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        return f"NeighborView(owner={self.owner}, n={len(self.entries)})"


def _neighbor_states(neighbors: Union[NeighborView, Sequence[AgentState]]) -> Sequence[AgentState]:
    if isinstance(neighbors, NeighborView):
        return neighbors.states
    return tuple(neighbors)


def _cruise(self_state: AgentState, spec: Optional[BehaviorSpec]) -> float:
    return self_state.speed if spec is None else spec.cruise_speed


def consensus_step(self_state: AgentState, neighbors, spec: Optional[BehaviorSpec] = None) -> MotionCommand:
    """Equal-weight heading average over the agent and its neighbours.

    Leaders ignore their neighbours and keep their own heading.
    """
    cruise = _cruise(self_state, spec)
    if self_state.is_leader:
        return MotionCommand(self_state.heading, cruise)
    states = _neighbor_states(neighbors)
    sx, sy = self_state.heading.x, self_state.heading.y
    for s in states:
        sx += s.heading.x
        sy += s.heading.y
    w = 1.0 / (len(states) + 1)
    try:
        heading = normalize((sx * w, sy * w))
    except ZeroVector:
        heading = self_state.heading
    return MotionCommand(heading, cruise)


def _repulsion_sum(p: Vec2, points: Iterable[Vec2]) -> Tuple[float, float]:
    sx = sy = 0.0
    for q in points:
        dx, dy = q.x - p.x, q.y - p.y
        d2 = dx * dx + dy * dy
        if d2 <= COINCIDENT_TOL * COINCIDENT_TOL:
            raise CoincidentAgents(f"neighbour at {q} coincides with {p}")
        sx += dx / d2
        sy += dy / d2
    return sx, sy


def perimeter_vector(self_state: AgentState, neighbors) -> Vec2:
    """Inverse-distance weighted sum of the unit directions to each neighbour.

    Points toward the nearby crowd; the perimeter rule moves along its negation.
    """
    sx, sy = _repulsion_sum(self_state.position, (s.position for s in _neighbor_states(neighbors)))
    return Vec2(sx, sy)


def perimeter_step(self_state: AgentState, neighbors, spec: Optional[BehaviorSpec] = None,
                   obstacles: Sequence[Vec2] = ()) -> MotionCommand:
    """Spread away from neighbours, closer ones weighing more.

    ``obstacles`` are sensed wall points in world coordinates.  In the default
    ``stop`` wall mode they only cut the speed to zero when one lies ahead
    within ``wall_standoff``.  ``slide`` instead strips the into-wall part of
    the heading so the robot keeps moving along the wall, stopping only when
    nothing is left.  In ``virtual`` mode they enter the sum as extra
    neighbours.
    """
    cruise = _cruise(self_state, spec)
    p = self_state.position
    sx, sy = _repulsion_sum(p, (s.position for s in _neighbor_states(neighbors)))
    virtual = spec is not None and spec.wall_mode == "virtual"
    if virtual and obstacles:
        wx, wy = _repulsion_sum(p, obstacles)
        sx, sy = sx + wx, sy + wy
    try:
        heading = normalize((-sx, -sy))
    except ZeroVector:
        heading = self_state.heading
    speed = cruise
    if obstacles and not virtual:
        standoff = 0.3 if spec is None else spec.wall_standoff
        slide = spec is not None and spec.wall_mode == "slide"
        hx, hy = heading.x, heading.y
        for q in obstacles:
            dx, dy = q.x - p.x, q.y - p.y
            dist = math.hypot(dx, dy)
            if dist < standoff and dx * hx + dy * hy > 0:
                if not slide:
                    speed = 0.0
                    break
                nx, ny = dx / dist, dy / dist
                k = hx * nx + hy * ny
                hx, hy = hx - k * nx, hy - k * ny
        if slide and (hx, hy) != (heading.x, heading.y):
            try:
                heading = normalize((hx, hy))
            except ZeroVector:
                speed = 0.0
            else:
                if math.hypot(hx, hy) < 1e-6:
                    speed = 0.0
    return MotionCommand(heading, speed)


def exploration_velocity(self_state: AgentState, neighbors, spec: BehaviorSpec) -> Vec2:
    """Scaled velocity of the goal / spacing / local-alignment rule.

    ``v = H*b + (1/N) sum_j g_ij ((1-H) - p0^2/d_ij^2) + (H/N) sum_{R u {i}} theta_j``
    with ``b`` the unit bearing to the goal, ``g_ij`` the unit direction to
    neighbour j and ``R`` the neighbours within ``spec.radius``.  With no
    neighbours the last sum is just the agent's own heading.
    """
    H = spec.H
    p = self_state.position
    states = _neighbor_states(neighbors)
    vx = vy = 0.0
    if H:
        goal = spec.goal
        if not isinstance(goal, Vec2):
            raise MissingGoal(f"agent {self_state.id} has H=1 but no goal position")
        gx, gy = goal.x - p.x, goal.y - p.y
        gn = math.hypot(gx, gy)
        if gn > ZERO_THRESHOLD:
            vx, vy = gx / gn, gy / gn
    n = len(states)
    p0sq = spec.p0 * spec.p0
    r2 = spec.radius * spec.radius
    mx = my = 0.0
    tx, ty = self_state.heading.x, self_state.heading.y
    for s in states:
        dx, dy = s.position.x - p.x, s.position.y - p.y
        d2 = dx * dx + dy * dy
        if d2 <= COINCIDENT_TOL * COINCIDENT_TOL:
            raise CoincidentAgents(f"agent {s.id} coincides with agent {self_state.id}")
        d = math.sqrt(d2)
        coef = (1 - H) - p0sq / d2
        mx += dx / d * coef
        my += dy / d * coef
        if H and d2 <= r2:
            tx += s.heading.x
            ty += s.heading.y
    if n:
        vx += mx / n
        vy += my / n
        if H:
            vx += H * tx / n
            vy += H * ty / n
    elif H:
        vx += tx
        vy += ty
    return Vec2(vx, vy)


def exploration_step(self_state: AgentState, neighbors, spec: BehaviorSpec) -> MotionCommand:
    v = exploration_velocity(self_state, neighbors, spec)
    mag = math.hypot(v.x, v.y)
    if mag <= ZERO_THRESHOLD:
        return MotionCommand(self_state.heading, 0.0)
    return MotionCommand(normalize(v), min(mag * spec.speed_gain, spec.cruise_speed))


def leader_follower_goal(leader: int, neighbors, last_known: Optional[Vec2] = None):
    """Freshest heard position of ``leader``, else ``last_known``, else NO_GOAL_YET."""
    best = None
    for s in _neighbor_states(neighbors):
        if s.id == leader and (best is None or s.tick > best.tick):
            best = s
    if best is not None:
        return best.position
    if last_known is not None:
        return last_known
    return NO_GOAL_YET


def known_target(self_state: AgentState, neighbors, sensed_light: Optional[Vec2] = None) -> Optional[Vec2]:
    if self_state.target_found is not None:
        return self_state.target_found
    if sensed_light is not None:
        return sensed_light
    relayed = [s for s in _neighbor_states(neighbors) if s.target_found is not None]
    if not relayed:
        return None
    # lowest sender id wins so the choice does not depend on arrival order
    return min(relayed, key=lambda s: s.id).target_found


def search_phase(state: AgentState) -> int:
    return 1 if state.target_found is None else 2


def search_and_explore_step(self_state: AgentState, neighbors, sensed_light: Optional[Vec2],
                            spec: BehaviorSpec, obstacles: Sequence[Vec2] = ()):
    """Perimeter defence until a target is known, then rendezvous on it.

    Returns ``(command, new_state)``; ``new_state`` carries the (sticky)
    ``target_found`` that the agent will broadcast from now on.
    """
    target = known_target(self_state, neighbors, sensed_light)
    if target is None:
        return perimeter_step(self_state, neighbors, spec, obstacles), self_state
    new_state = self_state if self_state.target_found == target else self_state.evolve(target_found=target)
    rendezvous = spec.with_(kind=BehaviorKind.EXPLORATION, H=1, goal=target)
    return exploration_step(new_state, neighbors, rendezvous), new_state


__all__ = [
    "CoincidentAgents", "MissingGoal", "MotionCommand", "NO_GOAL_YET", "NeighborView",
    "consensus_step", "exploration_step", "exploration_velocity", "known_target",
    "leader_follower_goal", "perimeter_step", "perimeter_vector", "search_and_explore_step",
    "search_phase",
]
