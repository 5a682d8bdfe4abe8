import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from swarmkit.behaviors import MotionCommand
from swarmkit.bodysim import (
    BodyKind,
    Light,
    Pose,
    SensorConfig,
    SimBody,
    World,
    segments_cross,
    sense,
    step_body,
)
from swarmkit.core import Heading, Vec2, seeded_rng

from conftest import angle

HOLO = BodyKind.holonomic(1.0)
DIFF = BodyKind.differential_drive(0.2)
ROOM = World(bounds=(0.0, 0.0, 13.5, 6.2), walls=((Vec2(5.0, 0.0), Vec2(5.0, 4.0)),))
QUIET = SensorConfig(position_sigma=0.0, heading_sigma_deg=0.0)


def cmd(hx, hy, speed):
    return MotionCommand(Heading(hx, hy), speed)


def test_holonomic_straight_line():
    p = step_body(HOLO, Pose(Vec2(0, 0), Heading(1, 0)), cmd(1, 0, 1.0), 0.5)
    assert p.position == Vec2(0.5, 0.0)


def test_diff_drive_turn_in_place():
    # 180 degree error: the turn budget (1 rad) cannot close it, so no forward motion
    p = step_body(DIFF, Pose(Vec2(1, 1), Heading(1, 0)), cmd(-1, 0, 0.2), 0.5)
    assert p.position == Vec2(1, 1)
    assert p.heading.angle == pytest.approx(1.0)


def test_diff_drive_small_error_moves_along_new_heading():
    target = Heading.from_angle(0.5)
    p = step_body(DIFF, Pose(Vec2(1, 1), Heading(1, 0)), MotionCommand(target, 0.2), 0.5)
    assert p.heading == target
    assert p.position.distance(Vec2(1, 1)) == pytest.approx(0.1)


def test_speed_clamped_and_degraded_halved():
    p = step_body(HOLO, Pose(Vec2(0, 0), Heading(1, 0)), cmd(1, 0, 10.0), 1.0)
    assert p.position.x == pytest.approx(1.0)
    body = SimBody(HOLO, Pose(Vec2(0, 0), Heading(1, 0)), World(), degraded=True)
    body.step(cmd(1, 0, 10.0), 1.0)
    assert body.pose.position.x == pytest.approx(0.5)


@pytest.mark.parametrize("kind", [HOLO, DIFF])
def test_commanded_into_wall_stops_at_standoff(kind):
    pose = Pose(Vec2(4.5, 2.0), Heading(1, 0))
    for _ in range(40):
        pose = step_body(kind, pose, cmd(1, 0, 5.0), 0.5, ROOM)
    assert pose.position.x < 5.0
    assert 5.0 - pose.position.x == pytest.approx(0.01, abs=1e-9)


def test_frozen_body_does_not_move():
    body = SimBody(HOLO, Pose(Vec2(0, 0), Heading(1, 0)), World(), frozen=True)
    body.step(cmd(0, 1, 1.0), 1.0)
    assert body.pose.position == Vec2(0, 0)


@pytest.mark.parametrize("kind", [HOLO, DIFF])
@given(start=st.tuples(st.floats(0.2, 13.3), st.floats(0.2, 6.0)),
       moves=st.lists(st.tuples(angle, st.floats(0, 3)), min_size=1, max_size=30))
def test_non_penetration_and_speed_limit(kind, start, moves):
    pose = Pose(Vec2(*start), Heading(1, 0))
    assume(not (abs(start[0] - 5.0) < 0.02 and start[1] < 4.02))  # not starting on the inner wall
    dt = 0.5
    for a, v in moves:
        new = step_body(kind, pose, MotionCommand(Heading.from_angle(a), v), dt, ROOM)
        assert ROOM.inside(new.position)
        assert new.position.distance(pose.position) <= kind.max_speed * dt + 1e-9
        for w in ROOM.walls:
            assert not segments_cross(pose.position, new.position, w)
        pose = new


def test_ray_reports_foot_of_perpendicular():
    world = World(bounds=(0.0, 0.0, 10.0, 10.0))
    r = sense(world, Pose(Vec2(3.0, 0.5), Heading(0, -1)), config=QUIET)
    assert r.obstacle_points[0].x == pytest.approx(3.0, abs=1e-9)
    assert r.obstacle_points[0].y == pytest.approx(0.0, abs=1e-9)
    assert len(r.obstacle_points) == 1  # the other five rays see nothing within 0.8 m


def test_ray_count_and_spacing():
    world = World(bounds=(0.0, 0.0, 1.0, 1.0))
    r = sense(world, Pose(Vec2(0.5, 0.5), Heading(1, 0)), config=QUIET)
    assert len(r.obstacle_points) == 6
    angles = sorted(round(math.degrees(math.atan2(p.y - 0.5, p.x - 0.5))) % 360 for p in r.obstacle_points)
    assert angles == [0, 60, 120, 180, 240, 300]


def test_light_radius_cutoff():
    world = World(lights=(Light(Vec2(5.0, 0.0), 1.0),))
    assert sense(world, Pose(Vec2(3.9, 0.0), Heading(1, 0)), config=QUIET).light is None
    assert sense(world, Pose(Vec2(4.1, 0.0), Heading(1, 0)), config=QUIET).light == Vec2(5.0, 0.0)


def test_light_occluded_by_wall():
    world = World(walls=((Vec2(4.5, -1.0), Vec2(4.5, 1.0)),), lights=(Light(Vec2(5.0, 0.0), 2.0),))
    assert sense(world, Pose(Vec2(4.0, 0.0), Heading(1, 0)), config=QUIET).light is None


def test_noise_off_reports_true_pose():
    pose = Pose(Vec2(1.0, 2.0), Heading.from_angle(0.3))
    r = sense(ROOM, pose, config=QUIET, rng=seeded_rng(0, "sense/0"))
    assert r.pose == pose


def test_sensing_is_side_effect_free():
    pose = Pose(Vec2(1.0, 2.0), Heading.from_angle(0.3))
    a = sense(ROOM, pose, noise=(0.01, -0.02, 0.001))
    b = sense(ROOM, pose, noise=(0.01, -0.02, 0.001))
    assert a == b


def test_noise_statistics():
    rng = seeded_rng(3, "sense/0")
    pose = Pose(Vec2(1.0, 2.0), Heading(1, 0))
    xs = np.array([sense(World(), pose, rng=rng).pose.position.x for _ in range(4000)])
    assert xs.mean() == pytest.approx(1.0, abs=0.001)
    assert xs.std() == pytest.approx(0.01, rel=0.05)


def test_world_validation():
    with pytest.raises(ValueError):
        World(bounds=(0, 0, -1, 1))
    with pytest.raises(ValueError):
        World(bounds=(0, 0, 1, 1), lights=(Light(Vec2(2, 2), 1.0),))
    with pytest.raises(ValueError):
        Light(Vec2(0, 0), 0.0)


def test_step_rejects_bad_dt():
    with pytest.raises(ValueError):
        step_body(HOLO, Pose(Vec2(0, 0), Heading(1, 0)), cmd(1, 0, 1), 0.0)
