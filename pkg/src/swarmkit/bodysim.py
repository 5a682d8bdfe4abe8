"""Simulated robot bodies in a bounded planar world.

The :class:`SimBody` is the mock stand-in for a real robot driver: it accepts
a :class:`~swarmkit.behaviors.MotionCommand`, reports a (noisy) pose and
returns sensed wall points and light sources in world coordinates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np

from .behaviors import MotionCommand
from .core import Heading, Vec2, angle_between

WALL_STANDOFF = 0.01
_EPS = 1e-12

Segment = Tuple[Vec2, Vec2]


class BodyType(str, enum.Enum):
    DIFFERENTIAL_DRIVE = "differential_drive"
    HOLONOMIC = "holonomic"


@dataclass(frozen=True)
class BodyKind:
    """Kinematic model plus its limits (m/s, rad/s)."""

    type: BodyType
    max_speed: float
    max_turn_rate: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "type", BodyType(self.type))
        if not (self.max_speed > 0 and self.max_turn_rate > 0):
            raise ValueError("body limits must be positive")

    @classmethod
    def differential_drive(cls, max_speed: float = 0.20, max_turn_rate: float = 2.0) -> "BodyKind":
        return cls(BodyType.DIFFERENTIAL_DRIVE, max_speed, max_turn_rate)

    @classmethod
    def holonomic(cls, max_speed: float = 1.0) -> "BodyKind":
        return cls(BodyType.HOLONOMIC, max_speed)


@dataclass(frozen=True)
class Light:
    center: Vec2
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("detection radius must be positive")


@dataclass(frozen=True)
class World:
    """Arena: optional rectangular bounds ``(xmin, ymin, xmax, ymax)``, walls and lights."""

    bounds: Optional[Tuple[float, float, float, float]] = None
    walls: Tuple[Segment, ...] = ()
    lights: Tuple[Light, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "walls", tuple(self.walls))
        object.__setattr__(self, "lights", tuple(self.lights))
        if self.bounds is not None:
            xmin, ymin, xmax, ymax = self.bounds
            if not (xmax > xmin and ymax > ymin):
                raise ValueError("empty bounds")
            for a, b in self.walls:
                if not (self.inside(a) and self.inside(b)):
                    raise ValueError(f"wall {a}-{b} outside bounds")
            for light in self.lights:
                if not self.inside(light.center):
                    raise ValueError(f"light at {light.center} outside bounds")

    def inside(self, p: Vec2) -> bool:
        if self.bounds is None:
            return True
        xmin, ymin, xmax, ymax = self.bounds
        return xmin <= p.x <= xmax and ymin <= p.y <= ymax

    @cached_property
    def _segments(self) -> Tuple[Segment, ...]:
        """Walls plus the four edges of the bounds."""
        segs = list(self.walls)
        if self.bounds is not None:
            xmin, ymin, xmax, ymax = self.bounds
            c = [Vec2(xmin, ymin), Vec2(xmax, ymin), Vec2(xmax, ymax), Vec2(xmin, ymax)]
            segs += [(c[i], c[(i + 1) % 4]) for i in range(4)]
        return tuple(segs)

    def segments(self) -> Tuple[Segment, ...]:
        return self._segments


@dataclass(frozen=True, slots=True)
class Pose:
    position: Vec2
    heading: Heading


@dataclass(frozen=True)
class SensorConfig:
    n_rays: int = 6
    sensor_range: float = 0.8
    position_sigma: float = 0.01
    heading_sigma_deg: float = 0.5


@dataclass(frozen=True)
class SensorReading:
    obstacle_points: Tuple[Vec2, ...]
    light: Optional[Vec2]
    pose: Pose


def ray_segment_hit(origin: Vec2, direction: Tuple[float, float], seg: Segment) -> Optional[float]:
    """Distance along a unit ray to ``seg``, or None if the ray misses it."""
    dx, dy = direction
    (ax, ay), (bx, by) = seg
    ex, ey = bx - ax, by - ay
    denom = dx * ey - dy * ex
    if abs(denom) < _EPS:
        return None
    wx, wy = ax - origin.x, ay - origin.y
    t = (wx * ey - wy * ex) / denom
    u = (wx * dy - wy * dx) / denom
    if t < 0 or u < -_EPS or u > 1 + _EPS:
        return None
    return t


def segments_cross(p: Vec2, q: Vec2, seg: Segment) -> bool:
    """True if segment p-q touches ``seg`` (endpoints included)."""
    dx, dy = q.x - p.x, q.y - p.y
    length = math.hypot(dx, dy)
    if length < _EPS:
        return False
    t = ray_segment_hit(p, (dx / length, dy / length), seg)
    return t is not None and t <= length


def _rotate_toward(current: Heading, target: Heading, max_angle: float) -> Heading:
    err = math.atan2(current.x * target.y - current.y * target.x,
                     current.x * target.x + current.y * target.y)
    if abs(err) <= max_angle:
        return target
    return Heading.from_angle(current.angle + math.copysign(max_angle, err))


def clip_motion(world: World, start: Vec2, end: Vec2, standoff: float = WALL_STANDOFF) -> Vec2:
    """Stop a straight move ``start -> end`` short of the first wall it would cross."""
    dx, dy = end.x - start.x, end.y - start.y
    length = math.hypot(dx, dy)
    if length < _EPS:
        return start
    ux, uy = dx / length, dy / length
    first = None
    for seg in world.segments():
        t = ray_segment_hit(start, (ux, uy), seg)
        if t is not None and t <= length + standoff and (first is None or t < first):
            first = t
    if first is None:
        return end
    travel = max(0.0, min(first - standoff, length))
    return Vec2(start.x + ux * travel, start.y + uy * travel)


def step_body(kind: BodyKind, pose: Pose, command: MotionCommand, dt: float,
              world: Optional[World] = None, speed_cap: Optional[float] = None) -> Pose:
    """Advance one tick of pure kinematics, never crossing a wall."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    vmax = kind.max_speed if speed_cap is None else min(kind.max_speed, speed_cap)
    speed = min(command.target_speed, vmax)
    if kind.type is BodyType.HOLONOMIC:
        heading = command.target_heading
        advance = speed * dt
    else:
        heading = _rotate_toward(pose.heading, command.target_heading, kind.max_turn_rate * dt)
        err = angle_between(heading, command.target_heading)
        advance = speed * dt * max(0.0, math.cos(err))
    start = pose.position
    end = Vec2(start.x + heading.x * advance, start.y + heading.y * advance)
    if world is not None:
        end = clip_motion(world, start, end)
    return Pose(end, heading)


def sense(world: World, pose: Pose, kind: Optional[BodyKind] = None,
          config: SensorConfig = SensorConfig(), rng: Optional[np.random.Generator] = None,
          noise: Optional[Tuple[float, float, float]] = None) -> SensorReading:
    """Ray-cast range finders, light detection and a pose estimate.

    ``noise`` may carry a pre-drawn ``(ex, ey, eheading_rad)`` triple; otherwise
    it is drawn from ``rng`` (no noise when ``rng`` is None).
    """
    p = pose.position
    segs = world.segments()
    hits: List[Vec2] = []
    base = pose.heading.angle
    for k in range(config.n_rays):
        a = base + k * 2 * math.pi / config.n_rays
        d = (math.cos(a), math.sin(a))
        best = None
        for seg in segs:
            t = ray_segment_hit(p, d, seg)
            if t is not None and t <= config.sensor_range and (best is None or t < best):
                best = t
        if best is not None:
            hits.append(Vec2(p.x + d[0] * best, p.y + d[1] * best))

    light = None
    best_d = math.inf
    for source in world.lights:
        dist = p.distance(source.center)
        if dist <= source.radius and dist < best_d:
            if not any(segments_cross(p, source.center, seg) for seg in world.walls):
                light, best_d = source.center, dist

    if noise is None and rng is not None:
        noise = draw_pose_noise(rng, config)
    if noise is None or noise == (0.0, 0.0, 0.0):
        est = pose
    else:
        ex, ey, eh = noise
        est = Pose(Vec2(p.x + ex, p.y + ey), Heading.from_angle(base + eh) if eh else pose.heading)
    return SensorReading(tuple(hits), light, est)


def draw_pose_noise(rng: np.random.Generator, config: SensorConfig) -> Tuple[float, float, float]:
    ex, ey, eh = rng.standard_normal(3)
    return (float(ex) * config.position_sigma, float(ey) * config.position_sigma,
            float(eh) * math.radians(config.heading_sigma_deg))


@dataclass
class SimBody:
    """Mock body: true pose, limits and the per-agent sensing noise stream."""

    kind: BodyKind
    pose: Pose
    world: World
    sensors: SensorConfig = SensorConfig()
    rng: Optional[np.random.Generator] = None
    degraded: bool = False
    frozen: bool = False
    last_reading: Optional[SensorReading] = field(default=None, repr=False)

    @property
    def speed_cap(self) -> float:
        cap = self.kind.max_speed
        return cap / 2 if self.degraded else cap

    def sense(self) -> SensorReading:
        self.last_reading = sense(self.world, self.pose, self.kind, self.sensors, self.rng)
        return self.last_reading

    def step(self, command: MotionCommand, dt: float) -> Pose:
        if not self.frozen:
            self.pose = step_body(self.kind, self.pose, command, dt, self.world, self.speed_cap)
        return self.pose
