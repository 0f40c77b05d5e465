"""Time-stamped cell activity log: append-only events, persistence, replay.

Timestamps are integer milliseconds since session start. On disk a log is
JSON Lines: one header line with session metadata, then one line per event::

    {"session":"s1","technology":"ivoice","workbook_sha256":"...","version":1,"settings":{...}}
    {"t":1234,"k":"enter","sheet":"Sales and Profit","cell":"F4","p":null}

Event kind tags: enter, leave, command, mark, unmark, scan_start,
scan_stop, scan_end, scan_auto, boundary, diag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .workbook import CellAddress, Workbook, parse_a1


class LogError(ValueError):
    pass


class MonotonicityViolation(LogError):
    pass


class StructureError(LogError):
    pass


class ReplayMismatch(LogError):
    def __init__(self, index: int, expected=None, actual=None):
        self.index = index
        self.expected = expected
        self.actual = actual
        super().__init__(f"replay diverges from log at event {index}: {expected!r} != {actual!r}")


class EventKind(Enum):
    CELL_ENTER = "enter"
    CELL_LEAVE = "leave"
    COMMAND_ISSUED = "command"
    MARK_ERROR = "mark"
    UNMARK_ERROR = "unmark"
    SCAN_START = "scan_start"
    SCAN_STOP = "scan_stop"
    SCAN_ENDED = "scan_end"
    SCAN_AUTO_STOPPED = "scan_auto"
    BOUNDARY_REACHED = "boundary"
    DIAGNOSTIC = "diag"


class Technology(Enum):
    IVOICE = "ivoice"
    BASELINE = "baseline"


@dataclass(frozen=True)
class ActivityEvent:
    t: int
    kind: EventKind
    addr: CellAddress | None = None
    payload: str | None = None

    def __post_init__(self) -> None:
        if self.t < 0:
            raise LogError(f"negative timestamp: {self.t}")
        if self.kind in (EventKind.CELL_ENTER, EventKind.CELL_LEAVE) and self.addr is None:
            raise LogError(f"{self.kind.value} events carry an address")


@dataclass
class EventLog:
    session_id: str
    technology: Technology
    workbook_sha256: str = ""
    settings: dict = field(default_factory=dict)
    events: list[ActivityEvent] = field(default_factory=list)

    @property
    def last_t(self) -> int:
        return self.events[-1].t if self.events else 0

    def record(self, event: ActivityEvent) -> None:
        if self.events and event.t < self.events[-1].t:
            raise MonotonicityViolation(
                f"event at t={event.t} before log tail t={self.events[-1].t}"
            )
        self.events.append(event)

    def extend(self, events: list[ActivityEvent]) -> None:
        for ev in events:
            self.record(ev)


@dataclass(frozen=True)
class Visit:
    addr: CellAddress
    enter_t: int
    leave_t: int

    @property
    def dwell_ms(self) -> int:
        return self.leave_t - self.enter_t


def visits(log: EventLog) -> list[Visit]:
    """Enter/leave pairs in order; an unclosed final visit closes at log end."""
    out: list[Visit] = []
    open_visit: tuple[CellAddress, int] | None = None
    for i, ev in enumerate(log.events):
        if ev.kind is EventKind.CELL_ENTER:
            if open_visit is not None:
                raise StructureError(f"double enter at event {i} ({ev.addr})")
            open_visit = (ev.addr, ev.t)
        elif ev.kind is EventKind.CELL_LEAVE:
            if open_visit is None:
                raise StructureError(f"leave without enter at event {i} ({ev.addr})")
            if ev.addr != open_visit[0]:
                raise StructureError(
                    f"leave {ev.addr} does not match open visit {open_visit[0]} at event {i}"
                )
            out.append(Visit(open_visit[0], open_visit[1], ev.t))
            open_visit = None
    if open_visit is not None and log.events:
        out.append(Visit(open_visit[0], open_visit[1], log.events[-1].t))
    return out


# ---------------------------------------------------------------------------
# JSONL persistence (canonical: fixed key order, compact separators)


def _dump_obj(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def event_to_json(ev: ActivityEvent) -> str:
    return _dump_obj(
        {
            "t": ev.t,
            "k": ev.kind.value,
            "sheet": ev.addr.sheet if ev.addr else None,
            "cell": ev.addr.a1 if ev.addr else None,
            "p": ev.payload,
        }
    )


def event_from_json(line: str) -> ActivityEvent:
    obj = json.loads(line)
    addr = None
    if obj.get("sheet") is not None and obj.get("cell") is not None:
        col, row = parse_a1(obj["cell"])
        addr = CellAddress(obj["sheet"], col, row)
    return ActivityEvent(int(obj["t"]), EventKind(obj["k"]), addr, obj.get("p"))


def dumps(log: EventLog) -> str:
    header = _dump_obj(
        {
            "session": log.session_id,
            "technology": log.technology.value,
            "workbook_sha256": log.workbook_sha256,
            "version": 1,
            "settings": {k: log.settings[k] for k in sorted(log.settings)},
        }
    )
    lines = [header] + [event_to_json(ev) for ev in log.events]
    return "\n".join(lines) + "\n"


def loads(text: str) -> EventLog:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise LogError("empty log document")
    header = json.loads(lines[0])
    log = EventLog(
        session_id=header.get("session", ""),
        technology=Technology(header.get("technology", "ivoice")),
        workbook_sha256=header.get("workbook_sha256", ""),
        settings=header.get("settings", {}),
    )
    for ln in lines[1:]:
        log.record(event_from_json(ln))
    return log


def save(log: EventLog, path: str | Path) -> None:
    Path(path).write_text(dumps(log), encoding="utf-8")


def load(path: str | Path) -> EventLog:
    return loads(Path(path).read_text(encoding="utf-8"))


def replay(log: EventLog, workbook: Workbook):
    """Re-issue the log's commands through a fresh engine; verify the stream.

    Returns the reconstructed session; raises :class:`ReplayMismatch` at the
    first divergence. Implemented in :mod:`gridpilot.session`.
    """
    from .session import replay_log

    return replay_log(log, workbook)
