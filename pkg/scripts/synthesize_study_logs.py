#!/usr/bin/env python3
"""End-to-end pipeline demo on synthetic participants.

Simulates six auditors working through fixtures/retail.json in a two-group
comparison: one group navigates with the interactive command set
(scans at the 1 s dwell, blank jumps, reference jumps), the other with the
baseline set (one dictated move per cell at ~2.3-3.3 s, worksheet
switching for remote references). Both tour the same data columns for the
same simulated duration and mark seeded errors they pass with the same
detection probability, so differences in the report come from navigation
pace alone. The logs then run through the full analysis pipeline:
coverage, errors found, scan per-cell times, navigation timings, replay
verification, and the exact rank-sum test between the groups.

Usage: synthesize_study_logs.py [out_dir]
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gridpilot import analysis, tcat
from gridpilot.session import AuditSession
from gridpilot.tcat import Technology
from gridpilot.workbook import CellAddress, Workbook, load

FIXTURE = Path(__file__).resolve().parents[1] / "fixtures" / "retail.json"
SESSION_MS = 6 * 60_000
DETECT_P = 0.75
MISRECOGNITION_P = 0.2
SALES = "Sales and Profit"


def column_tour(
    workbook: Workbook, sheet_name: str, row_limit: int | None = None
) -> list[tuple[int, int, int]]:
    """(col, first_row, last_row) for every column holding data.

    ``row_limit`` clips outlying summary rows so the tour's bottom row
    stays dense enough for sideways blank-jumps.
    """
    sheet = workbook.sheet(sheet_name)
    spans: dict[int, list[int]] = {}
    for (col, row), content in sheet.cells.items():
        if content.is_blank or (row_limit is not None and row > row_limit):
            continue
        spans.setdefault(col, []).append(row)
    return [(col, min(rows), max(rows)) for col, rows in sorted(spans.items())]


class _Auditor:
    """Shared bookkeeping: clock, seed marking, session driving."""

    def __init__(self, workbook: Workbook, technology: Technology, pid: str, rng: random.Random):
        self.rng = rng
        self.seeded = set(workbook.seeded_errors or ())
        self.marked: set[CellAddress] = set()
        self.session = AuditSession(
            workbook,
            technology=technology,
            session_id=pid,
            start=CellAddress(SALES, 1, 2),
        )
        self.t = 0

    def wait(self, lo: int, hi: int) -> None:
        self.t += self.rng.randint(lo, hi)

    def say(self, text: str) -> None:
        self.session.issue(text, self.t)

    def out_of_time(self) -> bool:
        return self.t >= SESSION_MS

    def maybe_mark(self) -> bool:
        cursor = self.session.nav.cursor
        if cursor in self.seeded and cursor not in self.marked and self.rng.random() < DETECT_P:
            self.marked.add(cursor)
            return True
        return False

    def finish(self) -> tcat.EventLog:
        self.session.end(self.t + 1000)
        return self.session.log


def ivoice_participant(workbook: Workbook, pid: str, rng: random.Random) -> tcat.EventLog:
    """Zigzag tour: scan down one column, jump right, scan up the next."""
    auditor = _Auditor(workbook, Technology.IVOICE, pid, rng)
    session = auditor.session
    tour = column_tour(workbook, SALES, row_limit=23)
    while not auditor.out_of_time():  # re-verify passes until time is up
        checked_refs: set[CellAddress] = set()
        for index, (col, top, bottom) in enumerate(tour):
            if auditor.out_of_time():
                break
            going_down = index % 2 == 0
            if index > 0:
                auditor.wait(700, 1300)
                auditor.say("jump right")
                if session.nav.cursor.col != col:
                    continue  # sparse row made the jump land off-plan
            direction = "down" if going_down else "up"
            goal_row = bottom if going_down else top
            auditor.wait(600, 1200)
            auditor.say(f"scan {direction}")
            while session.nav.scan is not None and not auditor.out_of_time():
                auditor.t += session.nav.dwell_ms
                auditor.session.tick(auditor.t)
                cursor = session.nav.cursor
                resume = False
                if auditor.maybe_mark():
                    auditor.say("stop")
                    auditor.wait(600, 1200)
                    auditor.say("mark error")
                    resume = True
                # remote reference spotted: check it and come back
                if (
                    any(not e.visible for e in session.nav.color_map)
                    and cursor not in checked_refs
                ):
                    checked_refs.add(cursor)
                    if session.nav.scan is not None:
                        auditor.say("stop")
                    auditor.wait(500, 900)
                    auditor.say("jump pink")
                    auditor.wait(1500, 3500)
                    auditor.say("jump back")
                    resume = True
                reached_goal = (
                    session.nav.cursor.row >= goal_row
                    if going_down
                    else session.nav.cursor.row <= goal_row
                )
                if reached_goal:
                    if session.nav.scan is not None:
                        auditor.wait(100, 300)
                        auditor.say("stop")
                    break
                if resume:
                    auditor.wait(400, 800)
                    auditor.say(f"scan {direction}")
        # reposition for the next pass: blank-jump back to the first column
        auditor.wait(800, 1500)
        auditor.say("jump up")
        while session.nav.cursor.col > 1 and not auditor.out_of_time():
            auditor.wait(600, 1100)
            auditor.say("jump left")
    return auditor.finish()


def baseline_participant(workbook: Workbook, pid: str, rng: random.Random) -> tcat.EventLog:
    auditor = _Auditor(workbook, Technology.BASELINE, pid, rng)
    session = auditor.session

    def dictate(text: str) -> None:
        # dictated cell addressing is prone to misrecognition; model a
        # failed attempt as an unknown command plus a retry
        if auditor.rng.random() < MISRECOGNITION_P:
            auditor.say(text.replace("cell", "sell").replace("move", "moof"))
            auditor.wait(1500, 2500)
        auditor.say(text)

    checked_remote = 0
    for col, top, bottom in column_tour(workbook, SALES, row_limit=23):
        if auditor.out_of_time():
            break
        auditor.wait(1700, 2600)
        dictate(f"go to cell {_label(col, top)}")
        for _ in range(top, bottom):
            if auditor.out_of_time():
                break
            auditor.wait(2300, 3300)  # dictate one move per cell
            auditor.say("move down")
            if auditor.maybe_mark():
                auditor.wait(800, 1500)
                auditor.say("mark error")
        # a few remote-reference checks per session, through one
        # intermediate worksheet each way
        if checked_remote < 3 and col >= 4 and not auditor.out_of_time():
            checked_remote += 1
            origin = session.nav.cursor
            auditor.wait(1700, 2400)
            auditor.say("previous worksheet")
            auditor.wait(1700, 2400)
            auditor.say("previous worksheet")
            auditor.wait(1800, 2600)
            dictate("go to cell D6")
            auditor.wait(2000, 4000)
            auditor.say("next worksheet")
            auditor.wait(1200, 1600)
            auditor.say("next worksheet")
            auditor.wait(1500, 2200)
            dictate(f"go to cell {origin.a1}")
    return auditor.finish()


def _label(col: int, row: int) -> str:
    letters = ""
    while col > 0:
        col, rem = divmod(col - 1, 26)
        letters = chr(rem + 65) + letters
    return f"{letters}{row}"


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("study_logs")
    out_dir.mkdir(parents=True, exist_ok=True)
    workbook = load(FIXTURE)
    rng = random.Random(2008)

    groups: dict[str, list[Path]] = {"ivoice": [], "baseline": []}
    for i in range(3):
        for maker, tech in ((ivoice_participant, "ivoice"), (baseline_participant, "baseline")):
            pid = f"{tech}-{i + 1}"
            log = maker(workbook, pid, random.Random(rng.random()))
            path = out_dir / f"{pid}.jsonl"
            tcat.save(log, path)
            groups[tech].append(path)
            print(f"wrote {path} ({len(log.events)} events)")

    print(f"\n{'participant':<14}{'coverage%':>10}{'errors%':>9}{'false':>6}"
          f"{'scan s/cell':>12}{'ref nav s':>10}{'minutes':>9}")
    coverages: dict[str, list[float]] = {"ivoice": [], "baseline": []}
    for tech, paths in groups.items():
        for path in paths:
            log = tcat.load(path)
            metrics = analysis.audit_metrics(log, workbook)
            ref = analysis.ref_nav_time(log)
            coverages[tech].append(metrics.coverage_pct)
            print(
                f"{log.session_id:<14}{metrics.coverage_pct:>10.1f}"
                f"{_fmt(metrics.errors_found_pct):>9}{metrics.false_marks:>6}"
                f"{_fmt(metrics.scan_cell_avg_s):>12}{_fmt(ref.mean_s):>10}"
                f"{metrics.duration_min:>9.1f}"
            )

    result = analysis.rank_sum_test(coverages["ivoice"], coverages["baseline"])
    print(
        f"\nrank-sum (coverage, interactive > baseline): "
        f"W={result.statistic:.1f}, one-sided p={result.p_one_sided:.4f} "
        f"(n={result.n}, m={result.m})"
    )
    ok = all(
        tcat.dumps(tcat.replay(tcat.load(p), workbook).log) == p.read_text(encoding="utf-8")
        for paths in groups.values()
        for p in paths
    )
    print("replay check:", "ok" if ok else "MISMATCH")


def _fmt(value) -> str:
    return "-" if value is None else f"{value:.2f}"


if __name__ == "__main__":
    main()
