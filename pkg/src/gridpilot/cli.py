"""Command-line entry points.

    gridpilot audit <wb.json> [--dwell-ms N] [--baseline] [--smart-scan]
                    [--csv name=path]... [--log out.jsonl]
    gridpilot serve <wb.json> --port P [--log-dir DIR] [--manual-clock] ...
    gridpilot replay <log.jsonl> <wb.json>
    gridpilot analyze <logs...> --workbook <wb.json>
                    [--group-a ...] [--group-b ...] [--cumulative] [--json out]
    gridpilot simulate --script <s.json> [--profile <p.json>] [--json out]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, tcat, workbook as wbmod
from .simulate import AuditScript, LatencyProfile, simulate
from .tcat import ReplayMismatch, Technology


def _load_workbook(path: str, csv_specs: list[str] | None) -> wbmod.Workbook:
    wb = wbmod.load(path)
    if csv_specs:
        wb = wbmod.add_csv_sheets(wb, csv_specs)
    return wb


def _cmd_audit(args: argparse.Namespace) -> int:
    from .repl import repl

    wb = _load_workbook(args.workbook, args.csv)
    technology = Technology.BASELINE if args.baseline else Technology.IVOICE
    repl(
        wb,
        technology=technology,
        dwell_ms=args.dwell_ms,
        smart_scan=args.smart_scan,
        log_path=args.log,
    )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    wb = _load_workbook(args.workbook, args.csv)
    technology = Technology.BASELINE if args.baseline else Technology.IVOICE
    frontend = args.frontend or str(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    print(f"serving on ws://{args.host}:{args.port}/session")
    serve(
        wb,
        port=args.port,
        host=args.host,
        technology=technology,
        log_dir=args.log_dir,
        manual_clock=args.manual_clock,
        dwell_ms=args.dwell_ms,
        smart_scan=args.smart_scan,
        frontend_dir=frontend,
    )
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    wb = wbmod.load(args.workbook)
    log = tcat.load(args.log)
    expected = wbmod.workbook_sha256(wb)
    if log.workbook_sha256 and log.workbook_sha256 != expected:
        print(f"warning: log was recorded against a different workbook ({log.workbook_sha256[:12]}...)")
    try:
        session = tcat.replay(log, wb)
    except ReplayMismatch as exc:
        print(f"REPLAY MISMATCH at event {exc.index}")
        print(f"  logged:   {exc.expected}")
        print(f"  replayed: {exc.actual}")
        return 1
    print(f"replay ok: {len(log.events)} events reproduced exactly")
    print(f"final cursor: {session.nav.cursor.text}; marks: {len(session.nav.error_marks)}")
    return 0


def _fmt(value: float | None, suffix: str = "") -> str:
    return "-" if value is None else f"{value:.2f}{suffix}"


def _cmd_analyze(args: argparse.Namespace) -> int:
    wb = _load_workbook(args.workbook, args.csv)
    paths = [Path(p) for p in args.logs]
    names = [p.name for p in paths]
    if len(set(names)) != len(names):
        print("error: log file names must be unique (they key the report)", file=sys.stderr)
        return 2
    logs = {p.name: tcat.load(p) for p in paths}
    report: dict = {"logs": {}}
    lines = [f"{'log':<28}{'tech':<10}{'coverage%':>10}{'errors%':>9}{'false':>6}"
             f"{'min':>7}{'scan s/c':>9}{'ref s':>7}{'blank s':>8}"]
    for name, log in logs.items():
        metrics = analysis.audit_metrics(log, wb, cumulative=args.cumulative)
        ref = analysis.ref_nav_time(log)
        blank = analysis.blank_jump_time(log, wb)
        report["logs"][name] = {
            "technology": log.technology.value,
            "coverage_pct": metrics.coverage_pct,
            "errors_found_pct": metrics.errors_found_pct,
            "false_marks": metrics.false_marks,
            "duration_min": metrics.duration_min,
            "scan_cell_avg_s": metrics.scan_cell_avg_s,
            "ref_nav_times_s": metrics.ref_nav_times_s,
            "ref_nav_mean_s": ref.mean_s,
            "blank_jump_times_s": metrics.blank_jump_times_s,
            "blank_jump_mean_s": blank.mean_s,
        }
        lines.append(
            f"{name:<28}{log.technology.value:<10}{metrics.coverage_pct:>10.1f}"
            f"{_fmt(metrics.errors_found_pct):>9}{metrics.false_marks:>6}"
            f"{metrics.duration_min:>7.1f}{_fmt(metrics.scan_cell_avg_s):>9}"
            f"{_fmt(ref.mean_s):>7}{_fmt(blank.mean_s):>8}"
        )
    if args.group_a and args.group_b:
        cov = {name: report["logs"][name]["coverage_pct"] for name in report["logs"]}
        missing = [n for n in args.group_a + args.group_b if n not in cov]
        if missing:
            print(f"error: group members not among the logs: {missing}", file=sys.stderr)
            return 2
        a = [cov[n] for n in args.group_a]
        b = [cov[n] for n in args.group_b]
        result = analysis.rank_sum_test(a, b)
        report["rank_sum"] = {
            "measure": "coverage_pct",
            "alternative": "group-a greater",
            "statistic": result.statistic,
            "p_one_sided": result.p_one_sided,
            "n": result.n,
            "m": result.m,
        }
        lines.append("")
        lines.append(
            f"rank-sum (coverage, A>B): W={result.statistic:.1f} "
            f"p={result.p_one_sided:.4f} (n={result.n}, m={result.m})"
        )
    text = "\n".join(lines)
    print(text)
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
        print(f"json report written to {args.json}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    script = AuditScript.load(args.script)
    profile = (
        LatencyProfile.from_json(Path(args.profile).read_text(encoding="utf-8"))
        if args.profile
        else LatencyProfile()
    )
    report = simulate(script, profile)
    print(report.to_text())
    if args.json:
        Path(args.json).write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
        print(f"json report written to {args.json}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gridpilot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="interactive terminal audit session")
    p.add_argument("workbook")
    p.add_argument("--dwell-ms", type=int, default=1000)
    p.add_argument("--baseline", action="store_true", help="use the baseline vocabulary")
    p.add_argument("--smart-scan", action="store_true")
    p.add_argument("--csv", action="append", help="add a values-only sheet: name=path")
    p.add_argument("--log", help="write the activity log here on exit")
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("serve", help="websocket session service")
    p.add_argument("workbook")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--dwell-ms", type=int, default=1000)
    p.add_argument("--baseline", action="store_true")
    p.add_argument("--smart-scan", action="store_true")
    p.add_argument("--csv", action="append")
    p.add_argument("--log-dir", help="persist session logs in this directory")
    p.add_argument("--manual-clock", action="store_true",
                   help="no server ticker; clients drive time via tick frames")
    p.add_argument("--frontend", help="directory with a built web console")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("replay", help="verify a log replays deterministically")
    p.add_argument("log")
    p.add_argument("workbook")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("analyze", help="coverage/timing report over session logs")
    p.add_argument("logs", nargs="+")
    p.add_argument("--workbook", required=True)
    p.add_argument("--csv", action="append")
    p.add_argument("--group-a", nargs="+", help="log file names forming sample A")
    p.add_argument("--group-b", nargs="+", help="log file names forming sample B")
    p.add_argument("--cumulative", action="store_true",
                   help="coverage sums dwells per cell instead of per-visit")
    p.add_argument("--json", help="also write a JSON report here")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("simulate", help="baseline-vs-ivoice latency model")
    p.add_argument("--script", required=True)
    p.add_argument("--profile")
    p.add_argument("--json", help="also write a JSON report here")
    p.set_defaults(func=_cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (wbmod.WorkbookError, tcat.LogError, analysis.AnalysisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
