"""Session driver: text commands in, engine events out, everything logged.

The driver is the single ordered queue the engine contract requires:
commands and scan ticks pass through it one at a time, each catching the
scan up to its timestamp first. Because the engine stamps scan advances at
scheduled times, a saved log can be replayed from its command events alone
and must reproduce the original event stream exactly.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass

from . import commands as cmds
from .commands import CommandError, CommandSet, ParsedCommand, interpret
from .engine import BadAddress, NavError, NavSession
from .tcat import ActivityEvent, EventKind, EventLog, ReplayMismatch, Technology
from .workbook import CellAddress, Workbook, WorkbookError, parse_address, workbook_sha256


def apply_command(nav: NavSession, cmd: ParsedCommand, t: int) -> list[ActivityEvent]:
    """Execute one parsed command against the engine."""
    match cmd:
        case cmds.JumpColor(color):
            return nav.jump_color(color, t)
        case cmds.JumpBack():
            return nav.jump_back(t)
        case cmds.JumpBlank(direction):
            return nav.jump_blank(direction, t)
        case cmds.ScanStart(direction):
            return nav.scan_start(direction, t)
        case cmds.ScanStop():
            return nav.scan_stop(t)
        case cmds.ShowColors():
            return nav.toggle_legend(True)
        case cmds.HideColors():
            return nav.toggle_legend(False)
        case cmds.SpeedUp():
            nav.adjust_dwell(-1, t)
            return []
        case cmds.SlowDown():
            nav.adjust_dwell(+1, t)
            return []
        case cmds.MarkError():
            return nav.set_error_mark(nav.cursor, True, t)
        case cmds.UnmarkError():
            return nav.set_error_mark(nav.cursor, False, t)
        case cmds.GoToCell(addr_text):
            try:
                target = parse_address(addr_text, default_sheet=nav.cursor.sheet)
            except WorkbookError as exc:
                raise BadAddress(str(exc)) from None
            return nav.select(target, t)
        case cmds.Move(direction, count):
            dc, dr = direction.delta
            col = max(1, nav.cursor.col + dc * count)
            row = max(1, nav.cursor.row + dr * count)
            return nav.select(CellAddress(nav.cursor.sheet, col, row), t)
        case cmds.NextWorksheet():
            return _switch_sheet(nav, +1, t)
        case cmds.PrevWorksheet():
            return _switch_sheet(nav, -1, t)
        case cmds.PressCtrlArrow(direction):
            return nav.jump_blank(direction, t)
    raise CommandError(f"unhandled command: {cmd!r}")


def _switch_sheet(nav: NavSession, step: int, t: int) -> list[ActivityEvent]:
    idx = nav.workbook.sheet_index(nav.cursor.sheet)
    nxt = idx + step
    if nxt < 0 or nxt >= len(nav.workbook.sheets):
        return []  # at the end of the tab order; nothing to move to
    target = CellAddress(nav.workbook.sheets[nxt].name, nav.cursor.col, nav.cursor.row)
    return nav.select(target, t)


@dataclass
class IssueResult:
    events: list[ActivityEvent]
    error_code: str | None = None

    @property
    def ok(self) -> bool:
        return self.error_code is None


class AuditSession:
    """A live audit session: one workbook, one engine, one append-only log."""

    def __init__(
        self,
        workbook: Workbook,
        technology: Technology = Technology.IVOICE,
        session_id: str | None = None,
        command_set: CommandSet | None = None,
        start: CellAddress | None = None,
        dwell_ms: int = 1000,
        smart_scan: bool = False,
        viewport_rows: int = 31,
        viewport_cols: int = 12,
        t0: int = 0,
    ):
        self.workbook = workbook
        self.technology = technology
        self.command_set = command_set or (
            CommandSet.IVOICE if technology is Technology.IVOICE else CommandSet.BASELINE
        )
        self.nav = NavSession(
            workbook,
            start=start,
            dwell_ms=dwell_ms,
            smart_scan=smart_scan,
            viewport_rows=viewport_rows,
            viewport_cols=viewport_cols,
        )
        self.log = EventLog(
            session_id=session_id or uuid.uuid4().hex[:12],
            technology=technology,
            workbook_sha256=workbook_sha256(workbook),
            settings={
                "command_set": self.command_set.value,
                "dwell_ms": dwell_ms,
                "smart_scan": smart_scan,
                "start": self.nav.cursor.text,
                "t0": t0,
                "viewport_cols": viewport_cols,
                "viewport_rows": viewport_rows,
            },
        )
        self.log.extend(self.nav.begin(t0))

    def _clamp(self, t: int) -> int:
        return max(t, self.log.last_t)

    def tick(self, now: int) -> list[ActivityEvent]:
        """Catch the scan up to ``now``; safe to call when idle."""
        events = self.nav.scan_tick(now)
        self.log.extend(events)
        return events

    def issue(self, text: str, t: int) -> IssueResult:
        """Record and execute one command at session time ``t`` ms."""
        t = self._clamp(t)
        events = self.tick(t)
        issued = ActivityEvent(t, EventKind.COMMAND_ISSUED, None, " ".join(text.split()))
        self.log.record(issued)
        events = events + [issued]
        try:
            cmd = interpret(text, self.command_set)
            cmd_events = apply_command(self.nav, cmd, t)
        except (CommandError, NavError) as exc:
            code = getattr(exc, "code", type(exc).__name__)
            diag = ActivityEvent(t, EventKind.DIAGNOSTIC, None, code)
            self.log.record(diag)
            return IssueResult(events + [diag], error_code=code)
        self.log.extend(cmd_events)
        return IssueResult(events + cmd_events)

    def end(self, t: int) -> list[ActivityEvent]:
        """Final scan catch-up; the log closes at its last event."""
        return self.tick(self._clamp(t))


def replay_log(log: EventLog, workbook: Workbook):
    """Drive a fresh session from the log's command events and compare.

    Returns the reconstructed :class:`AuditSession`; raises
    :class:`ReplayMismatch` at the first diverging event index.
    """
    settings = log.settings or {}
    start = None
    if settings.get("start"):
        start = parse_address(settings["start"])
    t0 = int(settings.get("t0", log.events[0].t if log.events else 0))
    session = AuditSession(
        workbook,
        technology=log.technology,
        session_id=log.session_id,
        command_set=CommandSet(settings["command_set"]) if "command_set" in settings else None,
        start=start,
        dwell_ms=int(settings.get("dwell_ms", 1000)),
        smart_scan=bool(settings.get("smart_scan", False)),
        viewport_rows=int(settings.get("viewport_rows", 31)),
        viewport_cols=int(settings.get("viewport_cols", 12)),
        t0=t0,
    )
    for ev in log.events:
        if ev.kind is EventKind.COMMAND_ISSUED:
            session.issue(ev.payload or "", ev.t)
    if log.events:
        session.end(log.events[-1].t)
    expected = log.events
    actual = session.log.events
    for i, (want, got) in enumerate(zip(expected, actual)):
        if want != got:
            raise ReplayMismatch(i, want, got)
    if len(expected) != len(actual):
        raise ReplayMismatch(min(len(expected), len(actual)))
    return session
