"""Session performance measures and the exact one-sided rank-sum test.

Coverage counts an eligible cell (numeric or formula content) as reviewed
when some single visit dwelt strictly longer than 0.3 s; a cumulative mode
is available because the source description is ambiguous on this point.

Scan-region and navigation timings come from explicit detection rules
over the event stream (documented per function): the logs carry
everything needed except cell blankness, which comes from the workbook.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .commands import CommandError, CommandSet, ParsedCommand, interpret
from . import commands as cmds
from .tcat import ActivityEvent, EventKind, EventLog, Technology, visits
from .workbook import CellAddress, Workbook, classify_eligible

DWELL_THRESHOLD_MS = 300
MIN_REGION_CELLS = 3
MIN_REGIONS = 3
MIN_OCCURRENCES = 3
BASELINE_RUN_MAX_GAP_MS = 10_000


class AnalysisError(ValueError):
    pass


class DegenerateWorkbook(AnalysisError):
    pass


class DegenerateSpec(AnalysisError):
    pass


class ExactModeUnavailable(AnalysisError):
    pass


# ---------------------------------------------------------------------------
# Coverage


def coverage(log: EventLog, workbook: Workbook, cumulative: bool = False) -> float:
    """Percent of eligible cells reviewed for more than 0.3 s.

    Per-visit by default: one visit must exceed the threshold on its own.
    ``cumulative=True`` sums a cell's dwells instead.
    """
    eligible = classify_eligible(workbook)
    if not eligible:
        raise DegenerateWorkbook("workbook has no numeric or formula cells")
    dwell: dict[CellAddress, int] = {}
    for visit in visits(log):
        if visit.addr not in eligible:
            continue
        if cumulative:
            dwell[visit.addr] = dwell.get(visit.addr, 0) + visit.dwell_ms
        else:
            dwell[visit.addr] = max(dwell.get(visit.addr, 0), visit.dwell_ms)
    covered = sum(1 for ms in dwell.values() if ms > DWELL_THRESHOLD_MS)
    return 100.0 * covered / len(eligible)


@dataclass(frozen=True)
class ErrorsFound:
    pct: float
    hits: int
    false_marks: int


def errors_found(marks: set[CellAddress], seeded: set[CellAddress]) -> ErrorsFound:
    """Fraction of seeded errors marked, plus the count of false marks."""
    if not seeded:
        raise DegenerateSpec("no seeded errors to score against")
    hits = len(marks & seeded)
    return ErrorsFound(100.0 * hits / len(seeded), hits, len(marks - seeded))


def marks_from_log(log: EventLog) -> set[CellAddress]:
    """Final error-mark set implied by the log's mark/unmark events."""
    marks: set[CellAddress] = set()
    for ev in log.events:
        if ev.kind is EventKind.MARK_ERROR and ev.addr is not None:
            marks.add(ev.addr)
        elif ev.kind is EventKind.UNMARK_ERROR and ev.addr is not None:
            marks.discard(ev.addr)
    return marks


def duration_min(log: EventLog) -> float:
    if not log.events:
        return 0.0
    return (log.events[-1].t - log.events[0].t) / 60_000.0


# ---------------------------------------------------------------------------
# Scan regions


@dataclass
class ScanRegionStats:
    per_cell_s: list[float] = field(default_factory=list)
    regions: int = 0
    mean_s: float | None = None


_SPAN_CLOSERS = (EventKind.SCAN_STOP, EventKind.SCAN_ENDED, EventKind.SCAN_AUTO_STOPPED)


def _scan_spans(log: EventLog) -> list[list[int]]:
    """Enter timestamps inside each scan_start..stop span."""
    spans: list[list[int]] = []
    current: list[int] | None = None
    for ev in log.events:
        if ev.kind is EventKind.SCAN_START:
            current = []
        elif ev.kind in _SPAN_CLOSERS and current is not None:
            spans.append(current)
            current = None
        elif ev.kind is EventKind.CELL_ENTER and current is not None:
            current.append(ev.t)
    if current is not None:
        spans.append(current)
    return spans


def _step_runs(log: EventLog) -> list[list[int]]:
    """Enter timestamps of maximal single-step same-direction move runs.

    Consecutive enters qualify when on one sheet, exactly one cell apart in
    a consistent direction, and within 10 s of each other.
    """
    enters = [ev for ev in log.events if ev.kind is EventKind.CELL_ENTER]
    runs: list[list[int]] = []
    run: list[int] = []
    direction: tuple[int, int] | None = None
    for prev, cur in zip(enters, enters[1:]):
        step = (
            (cur.addr.col - prev.addr.col, cur.addr.row - prev.addr.row)
            if cur.addr.sheet.casefold() == prev.addr.sheet.casefold()
            else None
        )
        unit = step is not None and abs(step[0]) + abs(step[1]) == 1
        close = cur.t - prev.t <= BASELINE_RUN_MAX_GAP_MS
        if unit and close and (direction is None or step == direction):
            if not run:
                run = [prev.t]
            run.append(cur.t)
            direction = step
        else:
            if run:
                runs.append(run)
            run = []
            direction = None
            if unit and close:
                run = [prev.t, cur.t]
                direction = step
    if run:
        runs.append(run)
    return runs


def scan_region_stats(log: EventLog) -> ScanRegionStats:
    """Average seconds per cell in scanned regions.

    Interactive logs use scan command spans; baseline logs use detected
    single-step runs. Regions must span at least three cells, the first
    cell's dwell is discarded, and the mean is undefined (None, not zero)
    with fewer than three qualifying regions — too few regions make a
    per-cell average meaningless, so none is reported.

    Per-cell time is the interval between consecutive enters, so the final
    cell of a region (whose review ends outside it) contributes no sample.
    """
    stats = ScanRegionStats()
    if log.technology is Technology.IVOICE:
        # span enters exclude the start cell, so n enters = n+1 region cells
        for enters in _scan_spans(log):
            if len(enters) + 1 < MIN_REGION_CELLS:
                continue
            stats.regions += 1
            stats.per_cell_s += [(b - a) / 1000.0 for a, b in zip(enters, enters[1:])]
    else:
        for enters in _step_runs(log):
            if len(enters) < MIN_REGION_CELLS:
                continue
            stats.regions += 1
            gaps = [(b - a) / 1000.0 for a, b in zip(enters, enters[1:])]
            stats.per_cell_s += gaps[1:]  # first gap is the first cell's dwell
    if stats.regions >= MIN_REGIONS and stats.per_cell_s:
        stats.mean_s = sum(stats.per_cell_s) / len(stats.per_cell_s)
    return stats


# ---------------------------------------------------------------------------
# Reference-check and blank-jump timings


@dataclass
class NavTimings:
    times_s: list[float] = field(default_factory=list)
    mean_s: float | None = None

    def finalize(self) -> "NavTimings":
        if len(self.times_s) >= MIN_OCCURRENCES:
            self.mean_s = sum(self.times_s) / len(self.times_s)
        return self


@dataclass
class _CommandGroup:
    cmd: ParsedCommand | None
    events: list[ActivityEvent]

    def first(self, kind: EventKind) -> ActivityEvent | None:
        return next((ev for ev in self.events if ev.kind is kind), None)

    def last(self, kind: EventKind) -> ActivityEvent | None:
        return next((ev for ev in reversed(self.events) if ev.kind is kind), None)


def _command_groups(log: EventLog) -> list[_CommandGroup]:
    command_set = (
        CommandSet.IVOICE if log.technology is Technology.IVOICE else CommandSet.BASELINE
    )
    groups: list[_CommandGroup] = []
    current: _CommandGroup | None = None
    for ev in log.events:
        if ev.kind is EventKind.COMMAND_ISSUED:
            try:
                cmd = interpret(ev.payload or "", command_set)
            except CommandError:
                cmd = None
            current = _CommandGroup(cmd, [])
            groups.append(current)
        elif current is not None:
            current.events.append(ev)
    return groups


def ref_nav_time(log: EventLog) -> NavTimings:
    """Cross-sheet reference-check traversal times, leave(source)→enter(dest).

    Interactive logs: each jump command that lands on another sheet.
    Baseline logs: each maximal run of worksheet-switch commands plus the
    one immediately following go-to-cell/move command (arriving at the
    referenced cell), measured from the first leave to the last enter.
    Issuing time of the first command falls before the source leave, so it
    is excluded by construction. The mean is reported only with three or
    more occurrences.
    """
    timings = NavTimings()
    groups = _command_groups(log)
    if log.technology is Technology.IVOICE:
        for group in groups:
            if not isinstance(group.cmd, (cmds.JumpColor, cmds.JumpBack)):
                continue
            leave, enter = group.first(EventKind.CELL_LEAVE), group.first(EventKind.CELL_ENTER)
            if leave and enter and leave.addr.sheet.casefold() != enter.addr.sheet.casefold():
                timings.times_s.append((enter.t - leave.t) / 1000.0)
        return timings.finalize()
    i = 0
    while i < len(groups):
        if not isinstance(groups[i].cmd, (cmds.NextWorksheet, cmds.PrevWorksheet)):
            i += 1
            continue
        j = i
        while j < len(groups) and isinstance(groups[j].cmd, (cmds.NextWorksheet, cmds.PrevWorksheet)):
            j += 1
        if j < len(groups) and isinstance(groups[j].cmd, (cmds.GoToCell, cmds.Move)):
            j += 1
        journey = groups[i:j]
        leaves = [ev for g in journey for ev in g.events if ev.kind is EventKind.CELL_LEAVE]
        enters = [ev for g in journey for ev in g.events if ev.kind is EventKind.CELL_ENTER]
        if leaves and enters:
            first_leave, last_enter = leaves[0], enters[-1]
            if first_leave.addr.sheet.casefold() != last_enter.addr.sheet.casefold():
                timings.times_s.append((last_enter.t - first_leave.t) / 1000.0)
        i = j
    return timings.finalize()


def _blanks_between(workbook: Workbook, a: CellAddress, b: CellAddress) -> int | None:
    """Count of blank cells strictly between two aligned same-sheet cells.

    None when the cells are not aligned on a row or column (or sheets
    differ); 0 when adjacent.
    """
    if a.sheet.casefold() != b.sheet.casefold():
        return None
    if a.row == b.row and a.col != b.col:
        lo, hi = sorted((a.col, b.col))
        line = [(c, a.row) for c in range(lo + 1, hi)]
    elif a.col == b.col and a.row != b.row:
        lo, hi = sorted((a.row, b.row))
        line = [(a.col, r) for r in range(lo + 1, hi)]
    else:
        return None
    sheet = workbook.sheet(a.sheet)
    blanks = sum(1 for col, row in line if sheet.cell(col, row).is_blank)
    return blanks if blanks == len(line) else None


def blank_jump_time(log: EventLog, workbook: Workbook) -> NavTimings:
    """Blank-gap traversal times, leave(source)→enter(next non-blank).

    A traversal bridges two non-blank cells with at least one blank cell in
    between, either skipped in one hop (jump/ctrl-arrow style: endpoints
    aligned, everything between blank) or stepped through (every visited
    cell between the endpoints blank). The first cell's dwell is excluded
    by measuring from its leave. Mean requires three or more occurrences.
    """
    timings = NavTimings()
    seq = visits(log)

    def is_blank(addr: CellAddress) -> bool:
        sheet = workbook.sheet(addr.sheet)
        return sheet is None or sheet.cell(addr.col, addr.row).is_blank

    marker = [i for i, v in enumerate(seq) if not is_blank(v.addr)]
    for a, b in zip(marker, marker[1:]):
        stepped_blanks = b - a - 1
        if stepped_blanks > 0:
            timings.times_s.append((seq[b].enter_t - seq[a].leave_t) / 1000.0)
            continue
        skipped = _blanks_between(workbook, seq[a].addr, seq[b].addr)
        if skipped is not None and skipped > 0:
            timings.times_s.append((seq[b].enter_t - seq[a].leave_t) / 1000.0)
    return timings.finalize()


# ---------------------------------------------------------------------------
# Exact rank-sum test


@dataclass(frozen=True)
class RankSumResult:
    statistic: float
    p_one_sided: float
    n: int
    m: int


def _midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def rank_sum_test(a: list[float], b: list[float]) -> RankSumResult:
    """Exact one-sided rank-sum test (alternative: sample A is greater).

    Midranks handle ties; the p-value is the exact probability, over all
    C(n+m, n) assignments of the pooled ranks, that A's rank sum is at
    least the observed one. Computed by subset-sum counting over doubled
    ranks (doubling makes midranks integral), equivalent to enumeration.
    """
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        raise AnalysisError("both samples must be non-empty")
    if n + m > 20:
        raise ExactModeUnavailable(f"exact test limited to n+m <= 20, got {n + m}")
    ranks = _midranks(list(a) + list(b))
    statistic = sum(ranks[:n])
    doubled = [round(r * 2) for r in ranks]
    observed = round(statistic * 2)
    total_sum = sum(doubled)
    # ways[k][s]: subsets of size k of the pooled doubled ranks with sum s
    ways = [[0] * (total_sum + 1) for _ in range(n + 1)]
    ways[0][0] = 1
    for value in doubled:
        for k in range(min(n, len(doubled)), 0, -1):
            row_prev, row_cur = ways[k - 1], ways[k]
            for s in range(total_sum, value - 1, -1):
                if row_prev[s - value]:
                    row_cur[s] += row_prev[s - value]
    at_least = sum(ways[n][observed:])
    p = at_least / math.comb(n + m, n)
    return RankSumResult(statistic, p, n, m)


# ---------------------------------------------------------------------------
# Per-log metrics bundle


@dataclass
class AuditMetrics:
    coverage_pct: float
    errors_found_pct: float | None
    duration_min: float
    scan_cell_avg_s: float | None
    ref_nav_times_s: list[float]
    blank_jump_times_s: list[float]
    false_marks: int = 0


def audit_metrics(log: EventLog, workbook: Workbook, cumulative: bool = False) -> AuditMetrics:
    seeded = workbook.seeded_errors
    found = errors_found(marks_from_log(log), seeded) if seeded else None
    return AuditMetrics(
        coverage_pct=coverage(log, workbook, cumulative=cumulative),
        errors_found_pct=found.pct if found else None,
        duration_min=duration_min(log),
        scan_cell_avg_s=scan_region_stats(log).mean_s,
        ref_nav_times_s=ref_nav_time(log).times_s,
        blank_jump_times_s=blank_jump_time(log, workbook).times_s,
        false_marks=found.false_marks if found else 0,
    )
