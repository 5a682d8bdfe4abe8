"""Command-line runner: ``swarmkit run`` and ``swarmkit sweep``.

Exit codes: 0 success, 2 invalid scenario/arguments, 3 file-system failure.
Floats in every output file are written with ``repr`` (shortest round trip),
so identical inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import metrics, scenario
from .core import ConfigError
from .engine import Engine, Termination

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3

TRAJECTORY_COLUMNS = ("tick", "agent", "x", "y", "hx", "hy", "speed", "phase")
COMM_COLUMNS = ("lo", "hi", "trials", "delivered", "ratio", "insufficient")
SWEEP_COLUMNS = (
    "row", "n", "seed", "status", "termination", "ticks",
    "first_find_tick", "first_find_speed", "all_reach_tick", "all_reach_speed",
    "runs", "timeouts", "errors",
    "first_find_speed_mean", "first_find_speed_var", "first_find_speed_std",
    "all_reach_speed_mean", "all_reach_speed_var", "all_reach_speed_std",
    "error",
)

log = logging.getLogger("swarmkit")


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    return v


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def resolve_scenario(name: str) -> Path:
    """A path, or the name of a bundled scenario (``consensus_10``)."""
    p = Path(name)
    if p.exists() or p.suffix == ".json" or "/" in name:
        return p
    if name in scenario.bundled_names():
        return scenario.bundled_path(name)
    return p


def _trajectory_rows(records):
    for r in records:
        for a in r.agents:
            if a.removed:
                continue
            yield (r.tick, a.id, a.position.x, a.position.y, a.heading.x, a.heading.y, a.speed, a.phase)


def write_run(result, out: Path) -> Dict:
    out.mkdir(parents=True, exist_ok=True)
    cfg = result.config
    _write_csv(out / "trajectory.csv", TRAJECTORY_COLUMNS, _trajectory_rows(result.records))
    _write_csv(out / "metrics.csv", ("tick",) + metrics.METRIC_COLUMNS, metrics.metric_rows(result.records))
    summary = {
        "termination": result.termination.value,
        "seed": cfg.seed,
        "config_hash": cfg.config_hash(),
        "n_agents": cfg.n_agents,
        "tick_duration": cfg.tick_duration,
        **result.summary,
    }
    if result.records and result.records[0].outcomes is not None:
        bins = metrics.comm_stats(result)
        _write_csv(out / "comm_stats.csv", COMM_COLUMNS,
                   ((b.lo, b.hi, b.trials, b.delivered, b.ratio, b.insufficient) for b in bins))
        summary["insufficient_bins"] = sum(b.insufficient for b in bins)
    (out / "summary.json").write_text(json.dumps(_json_safe(summary), indent=2, sort_keys=True) + "\n")
    return summary


def cmd_run(args) -> int:
    path = resolve_scenario(args.scenario)
    cfg = scenario.load(path, args.override)
    result = Engine(cfg, workers=args.workers, verbose_net=True if args.verbose_net else None).run()
    summary = write_run(result, Path(args.out))
    print(f"{path.name}: {summary['termination']} after {summary['ticks']} ticks -> {args.out}")
    return EXIT_OK


# -- sweep ---------------------------------------------------------------------

def _sweep_one(job):
    path, overrides, n, seed = job
    try:
        cfg = scenario.load(path, list(overrides) + [f"n_agents={n}", f"seed={seed}"], env={})
        res = Engine(cfg).run()
    except Exception as exc:  # a failing run is a data point, not a reason to stop the sweep
        return {"n": n, "seed": seed, "status": "error", "error": f"{type(exc).__name__}: {exc}"}
    s = res.summary
    return {
        "n": n, "seed": seed,
        "status": "timeout" if res.termination is Termination.MAX_TICKS else "ok",
        "termination": res.termination.value, "ticks": res.ticks,
        "first_find_tick": s["first_find_tick"], "first_find_speed": s["first_find_speed"],
        "all_reach_tick": s["all_reach_tick"], "all_reach_speed": s["all_reach_speed"],
    }


def _moments(values: List[float]):
    if not values:
        return None, None, None
    var = statistics.pvariance(values) if len(values) > 1 else 0.0
    return statistics.fmean(values), var, math.sqrt(var)


def aggregate(rows: List[Dict]) -> List[Dict]:
    """Per-n mean, population variance and std of the two speeds over ``ok`` runs."""
    out = []
    for n in sorted({r["n"] for r in rows}):
        group = [r for r in rows if r["n"] == n]
        ok = [r for r in group if r["status"] == "ok"]
        agg = {"row": "aggregate", "n": n, "runs": len(group),
               "timeouts": sum(r["status"] == "timeout" for r in group),
               "errors": sum(r["status"] == "error" for r in group)}
        for key in ("first_find_speed", "all_reach_speed"):
            vals = [r[key] for r in ok if r.get(key) is not None and math.isfinite(r[key])]
            agg[key + "_mean"], agg[key + "_var"], agg[key + "_std"] = _moments(vals)
        out.append(agg)
    return out


def sweep(path: Path, agents: Sequence[int], seeds: int, overrides=(), workers: int = 1,
          base_seed: Optional[int] = None) -> List[Dict]:
    base = scenario.load(path, overrides).seed if base_seed is None else base_seed
    jobs = [(str(path), tuple(overrides), n, base + k) for n in agents for k in range(seeds)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(_sweep_one, jobs))
    else:
        rows = [_sweep_one(j) for j in jobs]
    for r in rows:
        r["row"] = "run"
    return rows + aggregate(rows)


def cmd_sweep(args) -> int:
    path = resolve_scenario(args.scenario)
    try:
        agents = [int(x) for x in args.agents.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"--agents must be a comma-separated list of integers, got {args.agents!r}") from None
    if not agents or min(agents) < 1:
        raise ConfigError("--agents needs at least one positive count")
    if args.seeds < 1:
        raise ConfigError("--seeds must be >= 1")
    rows = sweep(path, agents, args.seeds, args.override, args.workers)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "sweep.csv", SWEEP_COLUMNS, ([r.get(c) for c in SWEEP_COLUMNS] for r in rows))
    n_runs = sum(r["row"] == "run" for r in rows)
    bad = sum(r["row"] == "run" and r["status"] != "ok" for r in rows)
    print(f"{path.name}: {n_runs} runs ({bad} timeout/error) -> {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_list(args) -> int:
    for name in scenario.bundled_names():
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swarmkit", description="Run swarm scenarios and write CSV/JSON results.")
    p.add_argument("--log-level", default="WARNING", help="python logging level (default WARNING)")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one scenario")
    r.add_argument("scenario", help="scenario file, or the name of a bundled scenario")
    r.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                   help="dotted path into the scenario document, e.g. agents.count=7 or n_agents=7")
    r.add_argument("--out", default="out", help="output directory (default ./out)")
    r.add_argument("--verbose-net", action="store_true", help="log every link outcome and write comm_stats.csv")
    r.add_argument("--workers", type=int, default=1, help="threads for per-agent evaluation")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="run the (agent count x seed) cross product")
    s.add_argument("scenario")
    s.add_argument("--agents", required=True, help="comma-separated agent counts, e.g. 2,4,6,8,10")
    s.add_argument("--seeds", type=int, default=10, help="runs per agent count; seeds are base, base+1, ...")
    s.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    s.add_argument("--out", default="out")
    s.add_argument("--workers", type=int, default=1, help="parallel runs (processes)")
    s.set_defaults(func=cmd_sweep)

    ls = sub.add_parser("list", help="list bundled scenarios")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"swarmkit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (KeyError, ValueError) as exc:
        # raised by engine/model constructors for values the loader let through
        print(f"swarmkit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"swarmkit: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
