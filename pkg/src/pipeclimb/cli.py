"""Command-line entry point.

    pipeclimb run --scenario FILE [--mode differential|rigid] [--dt S] [--out DIR] [--format csv|jsonl]
    pipeclimb compare --scenario FILE [--dt S] [--out DIR]
    pipeclimb catalog

``--scenario`` also accepts the name of a shipped gallery scenario,
e.g. ``reference``.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import catalog
from .analysis import format_summary, summarize
from .errors import PipeClimbError
from .scenario import FORMATS, Scenario, gallery, load_scenario
from .telemetry import export_trace
from .transmission import TRACKS
from .traversal import DriveMode, run_scenario

log = logging.getLogger("pipeclimb")


def _execute(sc: Scenario):
    trace = run_scenario(
        sc.network, sc.robot, sc.mode, sc.dt, sc.sample_every, roll=sc.roll, time_cap=sc.time_cap
    )
    return trace, summarize(trace, sc.network, sc.robot, name=sc.name)


def _write_outputs(out_dir: Path, stem: str, trace, report, fmt: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    trace_path = export_trace(trace, out_dir / f"{stem}.{fmt}", fmt)
    (out_dir / f"{stem}_summary.json").write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    return trace_path


def cmd_run(args) -> int:
    sc = load_scenario(args.scenario).with_overrides(
        mode=DriveMode.parse(args.mode) if args.mode else None,
        dt=args.dt,
        format=args.format,
        output_dir=args.out,
    )
    trace, report = _execute(sc)
    print(format_summary(report))
    out_dir = Path(sc.output_dir or Path("out") / sc.name)
    path = _write_outputs(out_dir, f"trace_{sc.mode.value}", trace, report, sc.format)
    print(f"  trace written to {path}")
    return 0 if report.complete else 1


def cmd_compare(args) -> int:
    base = load_scenario(args.scenario).with_overrides(dt=args.dt)
    results = {}
    for mode in DriveMode:
        results[mode] = _execute(base.with_overrides(mode=mode))
    diff, rigid = results[DriveMode.DIFFERENTIAL][1], results[DriveMode.RIGID][1]
    print(f"scenario {base.name}  roll={math.degrees(base.roll):g} deg  dt={base.dt:g} s")
    print("  slip distance [mm]    differential        rigid")
    for tr in TRACKS:
        print(f"    track {tr}          {diff.slip_distance[tr]:14.6g}  {rigid.slip_distance[tr]:14.6g}")
    print("  APE [%]               differential        rigid")
    for tr in TRACKS:
        print(f"    track {tr}          {diff.ape_percent[tr]:14.6g}  {rigid.ape_percent[tr]:14.6g}")
    if args.out:
        for mode, (trace, report) in results.items():
            _write_outputs(Path(args.out), f"trace_{mode.value}", trace, report, base.format)
    return 0 if diff.complete and rigid.complete else 1


def cmd_catalog(args) -> int:
    print("size      inner radius [mm]   long-radius elbow R [mm]")
    for key, size in catalog.SCHEDULE_40.items():
        print(f"{key:<8}  {size.inner_radius:17.3f}   {size.long_radius:24.1f}")
    print("gallery scenarios: " + ", ".join(sorted(gallery())))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pipeclimb", description="In-pipe three-track robot traversal simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one scenario and write its trace and summary")
    run.add_argument("--scenario", required=True)
    run.add_argument("--mode", choices=[m.value for m in DriveMode])
    run.add_argument("--dt", type=float)
    run.add_argument("--out")
    run.add_argument("--format", choices=FORMATS)
    run.set_defaults(func=cmd_run)

    cmp_ = sub.add_parser("compare", help="run differential and rigid drives side by side")
    cmp_.add_argument("--scenario", required=True)
    cmp_.add_argument("--dt", type=float)
    cmp_.add_argument("--out")
    cmp_.set_defaults(func=cmd_compare)

    cat = sub.add_parser("catalog", help="list catalog pipe sizes")
    cat.set_defaults(func=cmd_catalog)
    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "dt", None) is not None and not args.dt > 0:
        parser.print_usage(sys.stderr)
        print("pipeclimb: error: --dt must be > 0", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (PipeClimbError, FileNotFoundError) as exc:
        print(f"pipeclimb: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())
