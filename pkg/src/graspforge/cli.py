"""Command-line front end: plan, cache maintenance, verify, serve.

Exit codes follow one convention across subcommands: 0 for success, 2
for a valid-but-empty or failed-expectation outcome, 1 for hard errors
(bad files, schema violations, unknown plugins).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from .errors import GraspForgeError
from .kinematics import load_robot
from .planner import Planner, PlannerConfig
from .planner.cache import DiskGraspCache
from .taskmodel import grasps_to_doc, parse_task

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EMPTY = 2


def _fixture_path(name: str) -> Path:
    return Path(resources.files("graspforge") / "fixtures" / name)


def _load_planning_inputs(args):
    robot = load_robot(args.robot)
    task = parse_task(args.task, robot)
    if args.config:
        config = PlannerConfig.from_file(args.config)
    else:
        config = PlannerConfig()
    cache_env = os.environ.get("GRASPFORGE_CACHE_DIR")
    if config.cache_mode == "memory" and cache_env:
        config.cache_mode = "disk"
        config.cache_dir = cache_env
    return robot, task, config


def _statuses(cand) -> str:
    return ",".join(cand.per_step_status)


def _report_table(result) -> str:
    lines = ["rank\tscore\tsteps\tstatuses"]
    for rank, cand in enumerate(result):
        lines.append(f"{rank}\t{cand.score:.6f}\t{len(cand.per_step_status)}"
                     f"\t{_statuses(cand)}")
    return "\n".join(lines) + "\n"


def cmd_plan(args) -> int:
    try:
        robot, task, config = _load_planning_inputs(args)
        planner = Planner(robot, config)
        result = planner.plan(task, seed=args.seed, jobs=args.jobs)
    except GraspForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    top = result[: args.top] if args.top else result
    if args.out:
        out = Path(args.out)
        if out.suffix == ".tsv":
            out.write_text(_report_table(top))
        else:
            doc = grasps_to_doc(top)
            out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")

    timings = planner.last_timings
    print(f"planned {len(result)} candidate(s) "
          f"[generated {timings.get('generated', 0)}, "
          f"cache {'hit' if timings.get('cache_hit') else 'miss'}, "
          f"seed {args.seed}]")
    for rank, cand in enumerate(top):
        print(f"  {rank:3d}  score {cand.score:8.5f}  [{_statuses(cand)}]")
    for stage in ("generate", "filter", "evaluate"):
        if stage in timings:
            print(f"  {stage}: {timings[stage] * 1e3:.0f} ms")
    if not result:
        print("0 candidates")
        return EXIT_EMPTY
    return EXIT_OK


def _cache_from_args(args) -> DiskGraspCache | None:
    cache_dir = args.dir or os.environ.get("GRASPFORGE_CACHE_DIR")
    if not cache_dir:
        print("error: no cache directory (use --dir or GRASPFORGE_CACHE_DIR)",
              file=sys.stderr)
        return None
    return DiskGraspCache(cache_dir)


def cmd_cache(args) -> int:
    cache = _cache_from_args(args)
    if cache is None:
        return EXIT_ERROR
    if args.action == "list":
        keys = cache.keys()
        for key in keys:
            entry = cache.inspect(key)
            count = len(entry.grasps) if entry else 0
            print(f"{key}\t{count} grasps")
        if not keys:
            print("(cache empty)")
        return EXIT_OK
    if args.action == "clear":
        removed = cache.clear()
        print(f"removed {removed} entries")
        return EXIT_OK
    if not args.key:
        print("error: inspect needs a key", file=sys.stderr)
        return EXIT_ERROR
    entry = cache.inspect(args.key)
    if entry is None:
        print(f"unknown cache key: {args.key}", file=sys.stderr)
        return EXIT_EMPTY
    print(json.dumps({
        "ee_name": entry.ee_name,
        "digest": entry.digest,
        "generator": entry.generator_name,
        "params_hash": entry.params_hash,
        "grasp_count": len(entry.grasps),
    }, indent=2, sort_keys=True))
    return EXIT_OK


def _check_expectation(name, expect, result) -> list:
    failures = []
    count = len(result)
    if "min_candidates" in expect and count < expect["min_candidates"]:
        failures.append(f"{name}: {count} candidates, "
                        f"expected >= {expect['min_candidates']}")
    if "max_candidates" in expect and count > expect["max_candidates"]:
        failures.append(f"{name}: {count} candidates, "
                        f"expected <= {expect['max_candidates']}")
    if "step_count" in expect:
        bad = [c for c in result
               if len(c.per_step_status) != expect["step_count"]]
        if bad:
            failures.append(f"{name}: {len(bad)} candidates with wrong "
                            f"step-status length")
    if "statuses" in expect:
        allowed = set(expect["statuses"])
        bad = sum(1 for c in result
                  for s in c.per_step_status if s not in allowed)
        if bad:
            failures.append(f"{name}: {bad} step statuses outside {allowed}")
    return failures


def cmd_verify(args) -> int:
    suite_path = Path(args.suite) if args.suite else _fixture_path(
        "suite_default.json")
    try:
        suite = json.loads(suite_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read suite {suite_path}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if not isinstance(suite, dict) or not isinstance(
            suite.get("fixtures", []), list):
        print("error: suite must be an object with a 'fixtures' list",
              file=sys.stderr)
        return EXIT_ERROR
    base = suite_path.parent
    rows = suite.get("fixtures", [])
    if not rows:
        print("warning: 0 fixtures in suite")
        return EXIT_OK

    def resolve(entry):
        path = Path(entry)
        return path if path.is_absolute() else base / path

    failures = []
    for row in rows:
        name = row.get("name", row.get("task", "?"))
        try:
            robot = load_robot(resolve(row.get("robot", suite.get("robot"))))
            task = parse_task(resolve(row["task"]), robot)
            config_ref = row.get("config", suite.get("config"))
            config = (PlannerConfig.from_file(resolve(config_ref))
                      if config_ref else PlannerConfig())
            seed = int(row.get("seed", suite.get("seed", 0)))
            planner = Planner(robot, config)
            result = planner.plan(task, seed=seed, jobs=args.jobs)
        except (GraspForgeError, KeyError, OSError, TypeError) as exc:
            print(f"error: fixture {name!r}: {exc}", file=sys.stderr)
            return EXIT_ERROR
        row_failures = _check_expectation(name, row.get("expect", {}), result)
        verdict = "FAIL" if row_failures else "PASS"
        print(f"{verdict}  {name:<12} {len(result):4d} candidates")
        failures.extend(row_failures)

    if failures:
        for line in failures:
            print(f"  {line}")
        print(f"{len(failures)} expectation(s) failed")
        return EXIT_EMPTY
    print(f"all {len(rows)} fixtures passed")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve

    serve(port=args.port, ui_dir=args.ui_dir)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """argparse uses exit code 2 for usage errors; our contract says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="graspforge",
        description="Task-aware grasp planning for serial arms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan grasps for a task")
    p.add_argument("--robot", required=True, help="robot description JSON")
    p.add_argument("--task", required=True, help="task description JSON")
    p.add_argument("--config", help="planner config JSON")
    p.add_argument("--out", help="write grasps JSON (or .tsv report) here")
    p.add_argument("--top", type=int, default=0,
                   help="keep only the best N candidates (0 = all)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel filter workers")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("cache", help="inspect or clear the disk grasp cache")
    p.add_argument("action", choices=["list", "clear", "inspect"])
    p.add_argument("key", nargs="?", help="entry key for inspect")
    p.add_argument("--dir", help="cache directory "
                                 "(default: GRASPFORGE_CACHE_DIR)")
    p.set_defaults(func=cmd_cache)

    p = sub.add_parser("verify", help="run a fixture regression suite")
    p.add_argument("--suite", help="suite JSON (default: shipped suite)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("serve", help="start the planning service")
    p.add_argument("--port", type=int, default=None,
                   help="TCP port (default: GRASPFORGE_PORT or 8421)")
    p.add_argument("--ui-dir", default=None,
                   help="serve this directory at /ui")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
