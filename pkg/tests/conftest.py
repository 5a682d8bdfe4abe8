import math
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from swarmkit.core import AgentState, Heading, Vec2  # noqa: E402

coord = st.floats(min_value=-500, max_value=500, allow_nan=False, allow_infinity=False)
angle = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)
vec2 = st.builds(Vec2, coord, coord)
heading = st.builds(Heading.from_angle, angle)


def spaced_points(min_size=1, max_size=8, min_gap=0.05):
    """Lists of points with no two closer than ``min_gap``."""
    def ok(pts):
        return all(math.hypot(a[0] - b[0], a[1] - b[1]) >= min_gap
                   for i, a in enumerate(pts) for b in pts[i + 1:])
    pt = st.tuples(st.floats(-50, 50), st.floats(-50, 50))
    return st.lists(pt, min_size=min_size, max_size=max_size).filter(ok)


def state(i, pos, head=(1.0, 0.0), **kw):
    h = head if isinstance(head, Heading) else Heading(*head)
    p = pos if isinstance(pos, Vec2) else Vec2(*pos)
    return AgentState(i, 0, p, h, **kw)


@pytest.fixture
def mk():
    return state


_CRITERIA = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(_CRITERIA, [])

    def report(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}" + (f": {detail}" if detail else "")
        lines.append((number, line))
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines, key=lambda t: t[0]):
            terminalreporter.write_line(line)
