"""Domain types and seeded randomness shared by every swarmkit module.

Positions are :class:`Vec2`, directions are :class:`Heading` (always unit
vectors, never bare angles), and the broadcastable snapshot of a robot is an
:class:`AgentState`.  All randomness is obtained from :func:`seeded_rng`.
"""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Union

import numpy as np

ZERO_THRESHOLD = 1e-12
UNIT_TOL = 1e-9

LEADER = "leader"
DEGRADED = "degraded"
ROLE_FLAGS = (LEADER, DEGRADED)
WALL_MODES = ("stop", "slide", "virtual")


class SwarmError(Exception):
    """Base class for swarmkit errors."""


class ZeroVector(SwarmError, ValueError):
    """Raised when normalizing a vector whose length is at or below 1e-12."""


class ConfigError(SwarmError, ValueError):
    """Invalid scenario configuration."""


@dataclass(frozen=True, slots=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite Vec2 ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def __iter__(self):
        yield self.x
        yield self.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def distance(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def rotated(self, phi: float) -> "Vec2":
        c, s = math.cos(phi), math.sin(phi)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)


@dataclass(frozen=True, slots=True)
class Heading:
    """Unit direction vector ``(cos theta, sin theta)``."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite Heading ({self.x}, {self.y})")
        if abs(math.hypot(self.x, self.y) - 1.0) > UNIT_TOL:
            raise ValueError(f"Heading ({self.x}, {self.y}) is not unit length")

    @classmethod
    def from_angle(cls, theta: float) -> "Heading":
        return cls(math.cos(theta), math.sin(theta))

    @property
    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def as_vec(self) -> Vec2:
        return Vec2(self.x, self.y)

    def __iter__(self):
        yield self.x
        yield self.y

    def rotated(self, phi: float) -> "Heading":
        c, s = math.cos(phi), math.sin(phi)
        return normalize(Vec2(c * self.x - s * self.y, s * self.x + c * self.y))


def normalize(v: Union[Vec2, tuple]) -> Heading:
    """Return ``v / |v|`` as a :class:`Heading`.

    Raises :class:`ZeroVector` when ``|v| <= 1e-12``; callers decide what a
    missing direction means for them (usually: keep the previous heading).
    """
    x, y = v
    n = math.hypot(x, y)
    if not n > ZERO_THRESHOLD:
        raise ZeroVector(f"cannot normalize vector of length {n:g}")
    hx, hy = x / n, y / n
    # hypot-based division can leave |h| a few ulps off 1; that is well inside UNIT_TOL
    return Heading(hx, hy)


def angle_between(a: Heading, b: Heading) -> float:
    """Unsigned angle between two headings, radians in [0, pi]."""
    return abs(math.atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y))


@dataclass(frozen=True, slots=True)
class AgentState:
    """What one agent knows about itself and broadcasts to its neighbours."""

    id: int
    tick: int
    position: Vec2
    heading: Heading
    speed: float = 0.0
    target_found: Optional[Vec2] = None
    role_flags: frozenset = frozenset()

    def __post_init__(self):
        if self.id < 0:
            raise ValueError("agent id must be non-negative")
        if not (self.speed >= 0.0 and math.isfinite(self.speed)):
            raise ValueError(f"invalid speed {self.speed}")
        unknown = set(self.role_flags) - set(ROLE_FLAGS)
        if unknown:
            raise ValueError(f"unknown role flags {sorted(unknown)}")

    @property
    def is_leader(self) -> bool:
        return LEADER in self.role_flags

    def evolve(self, **changes) -> "AgentState":
        return replace(self, **changes)


class BehaviorKind(str, enum.Enum):
    CONSENSUS = "consensus"
    PERIMETER_DEFENSE = "perimeter_defense"
    EXPLORATION = "exploration"
    SEARCH_AND_EXPLORE = "search_and_explore"


@dataclass(frozen=True)
class BehaviorSpec:
    """Which update rule an agent runs, plus its parameters.

    ``goal`` is either a fixed point (:class:`Vec2`) or the id of a leader
    agent whose last heard position is used as the goal.  ``speed_gain``
    converts the dimensionless exploration velocity into m/s; the scenario loader
    defaults it to ``delta / tick_duration`` so that one tick advances the
    body by ``delta * v``.
    """

    kind: BehaviorKind
    p0: float = 1.0
    H: int = 0
    delta: float = 1.0
    goal: Union[Vec2, int, None] = None
    consensus_radius: Optional[float] = None
    cruise_speed: float = 0.1
    speed_gain: float = 1.0
    wall_standoff: float = 0.3
    wall_mode: str = "stop"

    def __post_init__(self):
        object.__setattr__(self, "kind", BehaviorKind(self.kind))
        if not self.p0 > 0:
            raise ValueError("p0 must be positive")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.H not in (0, 1):
            raise ValueError("H must be 0 or 1")
        if self.consensus_radius is not None and not self.consensus_radius > 0:
            raise ValueError("consensus_radius must be positive")
        if self.cruise_speed < 0 or self.speed_gain < 0:
            raise ValueError("speeds must be non-negative")
        if self.wall_mode not in WALL_MODES:
            raise ValueError(f"wall_mode must be one of {WALL_MODES}")

    @property
    def radius(self) -> float:
        return self.p0 if self.consensus_radius is None else self.consensus_radius

    def with_(self, **changes) -> "BehaviorSpec":
        return replace(self, **changes)


def _stream_entropy(seed: int, stream: str) -> list:
    digest = hashlib.sha256(stream.encode("utf-8")).digest()
    words = [int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4)]
    seed &= (1 << 64) - 1
    return [seed & 0xFFFFFFFF, seed >> 32, *words]


def seeded_rng(seed: int, stream: str) -> np.random.Generator:
    """Deterministic generator for one named consumer.

    The stream label is hashed with SHA-256 (never ``hash()``) so the result is
    stable across processes and platforms.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(_stream_entropy(seed, stream))))


def mean_heading_vector(headings: Iterable[Heading]) -> Vec2:
    sx = sy = 0.0
    n = 0
    for h in headings:
        sx += h.x
        sy += h.y
        n += 1
    if n == 0:
        raise ValueError("no headings")
    return Vec2(sx / n, sy / n)


__all__ = [
    "AgentState", "BehaviorKind", "BehaviorSpec", "ConfigError", "DEGRADED",
    "Heading", "LEADER", "SwarmError", "Vec2", "ZeroVector", "angle_between",
    "mean_heading_vector", "normalize", "seeded_rng",
]
