"""Observables over agent snapshots and run logs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import Heading

MIN_BIN_TRIALS = 100


def _heading_of(item) -> Heading:
    return item.heading if hasattr(item, "heading") else item


def _position_of(item) -> Tuple[float, float]:
    p = item.position if hasattr(item, "position") else item
    return (p[0], p[1]) if isinstance(p, (tuple, list)) else (p.x, p.y)


def heading_order(states: Iterable) -> float:
    """|sum of unit headings| / N: 1 when aligned, 0 when balanced."""
    sx = sy = 0.0
    n = 0
    for s in states:
        h = _heading_of(s)
        sx += h.x
        sy += h.y
        n += 1
    if n == 0:
        raise ValueError("heading_order needs at least one agent")
    return min(1.0, math.hypot(sx, sy) / n)


def heading_spread(states: Iterable) -> float:
    """Largest angle (rad) between any heading and the mean heading."""
    hs = [_heading_of(s) for s in states]
    if not hs:
        raise ValueError("heading_spread needs at least one agent")
    mx = sum(h.x for h in hs)
    my = sum(h.y for h in hs)
    if math.hypot(mx, my) <= 1e-12:
        return math.pi
    mean = math.atan2(my, mx)
    worst = 0.0
    for h in hs:
        d = abs((h.angle - mean + math.pi) % (2 * math.pi) - math.pi)
        worst = max(worst, d)
    return worst


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable) -> List[Tuple[float, float]]:
    """Hull vertices in counter-clockwise order (monotone chain, collinear points dropped)."""
    pts = sorted(set(_position_of(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: List[Tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polygon_area(vertices: Sequence[Tuple[float, float]]) -> float:
    n = len(vertices)
    if n < 3:
        return 0.0
    s = 0.0
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2.0


def coverage_area(states: Iterable) -> float:
    """Convex-hull area of the agents' positions (m^2); 0 for degenerate sets."""
    return polygon_area(convex_hull(states))


def inside_hull(point, hull: Sequence[Tuple[float, float]], margin: float = 0.0) -> bool:
    """True if ``point`` is strictly inside the CCW ``hull`` by more than ``margin``."""
    if len(hull) < 3:
        return False
    x, y = _position_of(point)
    for i in range(len(hull)):
        (x1, y1), (x2, y2) = hull[i], hull[(i + 1) % len(hull)]
        edge = math.hypot(x2 - x1, y2 - y1)
        if _cross((x1, y1), (x2, y2), (x, y)) / edge <= margin:
            return False
    return True


def min_pairwise_distance(states: Iterable) -> float:
    pts = np.array([_position_of(s) for s in states], dtype=float)
    if len(pts) < 2:
        return math.inf
    d = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
    d[np.diag_indices(len(pts))] = np.inf
    return float(d.min())


@dataclass
class MetricSeries:
    name: str
    samples: List[Tuple[int, float]]

    def __post_init__(self):
        ticks = [t for t, _ in self.samples]
        if any(b <= a for a, b in zip(ticks, ticks[1:])):
            raise ValueError("metric ticks must be strictly increasing")

    @property
    def values(self) -> List[float]:
        return [v for _, v in self.samples]


def time_to_event(run, predicate: Callable) -> Optional[int]:
    """First tick whose record satisfies ``predicate``; None if it never does."""
    records = run.records if hasattr(run, "records") else run
    for r in records:
        if predicate(r):
            return r.tick
    return None


def convergence_speed(ticks: Optional[int], tick_duration: float) -> Optional[float]:
    """Inverse of the time to an event, 1/(ticks*dt); None when the event never happened."""
    if ticks is None:
        return None
    if ticks == 0:
        return math.inf
    return 1.0 / (ticks * tick_duration)


def first_find(record) -> bool:
    return any(a.target_found is not None for a in record.active)


@dataclass(frozen=True)
class BinStat:
    lo: float
    hi: float
    trials: int
    delivered: int

    @property
    def ratio(self) -> float:
        return self.delivered / self.trials if self.trials else float("nan")

    @property
    def insufficient(self) -> bool:
        return self.trials < MIN_BIN_TRIALS


def comm_stats(run, bin_width: float = 10.0) -> List[BinStat]:
    """Delivery ratio per sender-receiver distance bin (needs verbose network logging)."""
    records = run.records if hasattr(run, "records") else run
    bins: Dict[int, List[int]] = {}
    seen_verbose = False
    for r in records:
        if r.outcomes is None:
            continue
        seen_verbose = True
        for o in r.outcomes:
            b = bins.setdefault(int(o.distance // bin_width), [0, 0])
            b[0] += 1
            b[1] += o.delivered
    if not seen_verbose:
        raise ValueError("comm_stats needs a run recorded with verbose network logging")
    return [BinStat(k * bin_width, (k + 1) * bin_width, t, d) for k, (t, d) in sorted(bins.items())]


def summarize(records, config) -> Dict:
    """Headline numbers for summary.json."""
    from .engine import all_reached_target

    out: Dict = {"ticks": len(records), "n_agents": config.n_agents}
    if not records:
        return out
    last = records[-1].active
    out["final_heading_order"] = heading_order(a for a in last) if last else None
    out["final_coverage_area"] = coverage_area(last)
    mpd = min_pairwise_distance(last)
    out["final_min_pair_distance"] = None if math.isinf(mpd) else mpd
    out["messages_sent"] = sum(r.sent for r in records)
    out["messages_delivered"] = sum(r.delivered for r in records)
    ff = time_to_event(records, first_find)
    reach = time_to_event(records, lambda r: all_reached_target(r, config))
    out["first_find_tick"] = ff
    out["all_reach_tick"] = reach
    out["first_find_speed"] = convergence_speed(ff, config.tick_duration)
    out["all_reach_speed"] = convergence_speed(reach, config.tick_duration)
    return out


METRIC_COLUMNS = ("heading_order", "heading_spread", "coverage_area", "min_pair_distance", "sent", "delivered")


def metric_rows(records) -> List[Tuple]:
    rows = []
    for r in records:
        act = r.active
        mpd = min_pairwise_distance(act) if act else math.inf
        rows.append((
            r.tick,
            heading_order(act) if act else float("nan"),
            heading_spread(act) if act else float("nan"),
            coverage_area(act),
            mpd if not math.isinf(mpd) else float("nan"),
            r.sent,
            r.delivered,
        ))
    return rows


def series(records, name: str) -> MetricSeries:
    k = METRIC_COLUMNS.index(name) + 1
    return MetricSeries(name, [(row[0], row[k]) for row in metric_rows(records)])
