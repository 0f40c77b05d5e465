"""Interactive audit-session state machine.

One :class:`NavSession` owns a cursor, a viewport, the reference color map,
a jump stack, the scan state, and the set of error marks. Every operation
takes an injected timestamp (integer ms since session start) and returns
the activity events it produced; the engine never reads a wall clock, so a
session is deterministic and replayable.

Scan advances are scheduled: each advance is stamped ``last_advance +
dwell`` and a late tick catches up, so event timestamps depend only on the
scan start time and the dwell, never on tick arrival jitter.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .formula import FormulaError, extract_references, shape_of, similar
from .tcat import ActivityEvent, EventKind
from .workbook import CellAddress, CellContent, CellKind, Sheet, Workbook

DEFAULT_DWELL_MS = 1000
DWELL_MIN_MS = 250
DWELL_MAX_MS = 5000
DWELL_STEP_MS = 250
DEFAULT_VIEW_ROWS = 31
DEFAULT_VIEW_COLS = 12
MAX_COLOR_SHORTCUTS = 7


class NavError(Exception):
    """Command rejected; the session state is unchanged."""

    code = "NavError"


class NoSuchColor(NavError):
    code = "NoSuchColor"


class NothingToJumpBackTo(NavError):
    code = "NothingToJumpBackTo"


class ScanBusy(NavError):
    code = "ScanBusy"


class BadAddress(NavError):
    code = "BadAddress"


class ColorName(Enum):
    """The seven reference colors, in fixed assignment order."""

    BLUE = "blue"
    GREEN = "green"
    PINK = "pink"
    RED = "red"
    LIME = "lime"
    ORANGE = "orange"
    PURPLE = "purple"


PALETTE: tuple[ColorName, ...] = tuple(ColorName)


class Direction(Enum):
    UP = "up"
    DOWN = "down"
    LEFT = "left"
    RIGHT = "right"

    @property
    def delta(self) -> tuple[int, int]:
        return {
            Direction.UP: (0, -1),
            Direction.DOWN: (0, 1),
            Direction.LEFT: (-1, 0),
            Direction.RIGHT: (1, 0),
        }[self]


@dataclass(frozen=True)
class ColorEntry:
    color: ColorName
    target: CellAddress
    visible: bool


@dataclass
class Viewport:
    """The visible window: top-left cell plus a fixed row/col extent."""

    top_left: CellAddress
    rows: int = DEFAULT_VIEW_ROWS
    cols: int = DEFAULT_VIEW_COLS

    def contains(self, addr: CellAddress) -> bool:
        return is_visible(addr, self)

    def scroll_to(self, target: CellAddress) -> None:
        """Minimal shift that brings ``target`` into the window."""
        top = self.top_left
        col, row = top.col, top.row
        if target.col < col:
            col = target.col
        elif target.col > col + self.cols - 1:
            col = target.col - self.cols + 1
        if target.row < row:
            row = target.row
        elif target.row > row + self.rows - 1:
            row = target.row - self.rows + 1
        self.top_left = CellAddress(target.sheet, col, row)


def is_visible(addr: CellAddress, viewport: Viewport) -> bool:
    """True iff ``addr`` is on the viewport's sheet and inside its rectangle."""
    top = viewport.top_left
    return (
        addr.sheet.casefold() == top.sheet.casefold()
        and top.col <= addr.col <= top.col + viewport.cols - 1
        and top.row <= addr.row <= top.row + viewport.rows - 1
    )


@dataclass
class ScanActive:
    direction: Direction
    dwell_ms: int
    smart: bool
    last_advance_t: int


class NavSession:
    """Cursor + viewport + color map + scan + marks over one workbook."""

    def __init__(
        self,
        workbook: Workbook,
        start: CellAddress | None = None,
        dwell_ms: int = DEFAULT_DWELL_MS,
        smart_scan: bool = False,
        viewport_rows: int = DEFAULT_VIEW_ROWS,
        viewport_cols: int = DEFAULT_VIEW_COLS,
    ):
        if not workbook.sheets:
            raise BadAddress("workbook has no sheets")
        if start is None:
            start = CellAddress(workbook.sheets[0].name, 1, 1)
        self.workbook = workbook
        self.cursor = self._checked(start)
        self.viewport = Viewport(
            CellAddress(self.cursor.sheet, 1, 1), viewport_rows, viewport_cols
        )
        self.viewport.scroll_to(self.cursor)
        self.jump_stack: list[CellAddress] = []
        self.color_map: list[ColorEntry] = []
        self.legend_visible = False
        self.scan: ScanActive | None = None
        self.dwell_ms = max(DWELL_MIN_MS, min(DWELL_MAX_MS, dwell_ms))
        self.smart_scan = smart_scan
        self.error_marks: set[CellAddress] = set()
        self._begun = False

    # -- helpers ------------------------------------------------------------

    def _checked(self, addr: CellAddress) -> CellAddress:
        """Canonicalize the sheet spelling; reject unknown sheets."""
        name = self.workbook.resolve_sheet_name(addr.sheet)
        if name is None:
            raise BadAddress(f"no such sheet: {addr.sheet!r}")
        if name == addr.sheet:
            return addr
        return CellAddress(name, addr.col, addr.row)

    def _sheet(self) -> Sheet:
        return self.workbook.sheet(self.cursor.sheet)

    def cell(self, addr: CellAddress | None = None) -> CellContent:
        return self.workbook.cell(addr or self.cursor)

    # -- lifecycle ----------------------------------------------------------

    def begin(self, t: int) -> list[ActivityEvent]:
        """Enter the starting cell; call exactly once per session."""
        if self._begun:
            raise NavError("session already begun")
        self._begun = True
        events = [ActivityEvent(t, EventKind.CELL_ENTER, self.cursor)]
        events += self._recompute_colors(t)
        return events

    # -- core movement ------------------------------------------------------

    def select(self, target: CellAddress, t: int) -> list[ActivityEvent]:
        """Move the cursor: leave the old cell, enter the new one."""
        target = self._checked(target)
        events = [
            ActivityEvent(t, EventKind.CELL_LEAVE, self.cursor),
            ActivityEvent(t, EventKind.CELL_ENTER, target),
        ]
        self.cursor = target
        if self.viewport.top_left.sheet.casefold() != target.sheet.casefold():
            top = self.viewport.top_left
            self.viewport.top_left = CellAddress(target.sheet, top.col, top.row)
        self.viewport.scroll_to(target)
        events += self._recompute_colors(t)
        return events

    def _recompute_colors(self, t: int) -> list[ActivityEvent]:
        self.color_map, note = self.compute_reference_colors()
        if note:
            return [ActivityEvent(t, EventKind.DIAGNOSTIC, self.cursor, note)]
        return []

    def compute_reference_colors(self) -> tuple[list[ColorEntry], str | None]:
        """Color shortcuts for the cursor cell's references.

        Textual order, ranges mapped to their first cell, duplicate targets
        share the first color, at most seven entries. Non-formula cells get
        an empty map; a parse failure gets an empty map plus a note.
        """
        content = self.cell()
        if content.kind is not CellKind.FORMULA:
            return [], None
        try:
            items = extract_references(content.value)
        except FormulaError as exc:
            return [], f"formula_parse_error: {exc}"
        entries: list[ColorEntry] = []
        seen: set[tuple[str, int, int]] = set()
        dropped: list[str] = []
        for item in items:
            ref = item.start_ref
            sheet_name = ref.sheet or self.cursor.sheet
            canonical = self.workbook.resolve_sheet_name(sheet_name)
            if canonical is None:
                dropped.append(sheet_name)
                continue
            key = (canonical.casefold(), ref.col, ref.row)
            if key in seen:
                continue
            seen.add(key)
            if len(entries) < MAX_COLOR_SHORTCUTS:
                target = CellAddress(canonical, ref.col, ref.row)
                entries.append(
                    ColorEntry(PALETTE[len(entries)], target, is_visible(target, self.viewport))
                )
        note = f"unknown_sheet: {', '.join(dropped)}" if dropped else None
        return entries, note

    # -- reference jumps ----------------------------------------------------

    def jump_color(self, color: ColorName, t: int) -> list[ActivityEvent]:
        entry = next((e for e in self.color_map if e.color is color), None)
        if entry is None:
            raise NoSuchColor(f"no {color.value} reference on the current cell")
        origin = self.cursor
        events = self.select(entry.target, t)
        self.jump_stack.append(origin)
        return events

    def jump_back(self, t: int) -> list[ActivityEvent]:
        if not self.jump_stack:
            raise NothingToJumpBackTo("jump stack is empty")
        target = self.jump_stack.pop()
        return self.select(target, t)

    def toggle_legend(self, show: bool) -> list[ActivityEvent]:
        self.legend_visible = show
        return []

    # -- blank jumps ----------------------------------------------------------

    def _blank_jump_target(self, direction: Direction) -> tuple[CellAddress, bool]:
        """Next non-blank cell beyond the cursor, or the used-range edge.

        Returns (target, boundary_hit).
        """
        sheet = self._sheet()
        dc, dr = direction.delta
        col, row = self.cursor.col, self.cursor.row
        if dr == 0:
            candidates = [
                c
                for (c, r), content in sheet.cells.items()
                if r == row and not content.is_blank and (c - col) * dc > 0
            ]
            if candidates:
                target_col = min(candidates) if dc > 0 else max(candidates)
                return CellAddress(self.cursor.sheet, target_col, row), False
        else:
            candidates = [
                r
                for (c, r), content in sheet.cells.items()
                if c == col and not content.is_blank and (r - row) * dr > 0
            ]
            if candidates:
                target_row = min(candidates) if dr > 0 else max(candidates)
                return CellAddress(self.cursor.sheet, col, target_row), False
        bounds = sheet.used_range
        if bounds is None:
            return self.cursor, True
        min_col, min_row, max_col, max_row = bounds
        if dr == 0:
            edge = max_col if dc > 0 else min_col
            if (edge - col) * dc > 0:
                return CellAddress(self.cursor.sheet, edge, row), True
        else:
            edge = max_row if dr > 0 else min_row
            if (edge - row) * dr > 0:
                return CellAddress(self.cursor.sheet, col, edge), True
        return self.cursor, True

    def jump_blank(self, direction: Direction, t: int) -> list[ActivityEvent]:
        """Move to the next non-blank cell in ``direction``.

        With nothing non-blank ahead, the cursor falls back to the
        used-range edge (never moving against the direction) and a
        boundary event is emitted.
        """
        target, boundary = self._blank_jump_target(direction)
        events = self.select(target, t)
        if boundary:
            events.append(
                ActivityEvent(t, EventKind.BOUNDARY_REACHED, self.cursor, direction.value)
            )
        return events

    # -- scanning -------------------------------------------------------------

    def scan_start(self, direction: Direction, t: int, smart: bool | None = None) -> list[ActivityEvent]:
        if self.scan is not None:
            raise ScanBusy("a scan is already active")
        if smart is None:
            smart = self.smart_scan
        self.scan = ScanActive(direction, self.dwell_ms, smart, last_advance_t=t)
        return [ActivityEvent(t, EventKind.SCAN_START, self.cursor, direction.value)]

    def scan_tick(self, now: int) -> list[ActivityEvent]:
        """Advance the scan through every dwell boundary at or before ``now``."""
        events: list[ActivityEvent] = []
        while self.scan is not None and self.scan.last_advance_t + self.scan.dwell_ms <= now:
            due = self.scan.last_advance_t + self.scan.dwell_ms
            events += self._scan_advance(due)
        return events

    def _scan_advance(self, due: int) -> list[ActivityEvent]:
        scan = self.scan
        dc, dr = scan.direction.delta
        nxt_col, nxt_row = self.cursor.col + dc, self.cursor.row + dr
        bounds = self._sheet().used_range
        outside = (
            bounds is None
            or not (bounds[0] <= nxt_col <= bounds[2])
            or not (bounds[1] <= nxt_row <= bounds[3])
        )
        if nxt_col < 1 or nxt_row < 1 or outside:
            self.scan = None
            return [ActivityEvent(due, EventKind.SCAN_ENDED, self.cursor, scan.direction.value)]
        previous = self.cursor
        events = self.select(CellAddress(self.cursor.sheet, nxt_col, nxt_row), due)
        scan.last_advance_t = due
        if scan.smart and not similar(
            shape_of(self.cell(previous), previous), shape_of(self.cell(), self.cursor)
        ):
            self.scan = None
            events.append(
                ActivityEvent(due, EventKind.SCAN_AUTO_STOPPED, self.cursor, scan.direction.value)
            )
        return events

    def scan_stop(self, t: int) -> list[ActivityEvent]:
        if self.scan is None:
            return []
        direction = self.scan.direction
        self.scan = None
        return [ActivityEvent(t, EventKind.SCAN_STOP, self.cursor, direction.value)]

    def adjust_dwell(self, delta_steps: int, t: int | None = None) -> int:
        """Change the scan dwell by 250 ms per step (positive = slower).

        A running scan adopts the new dwell with its countdown rebased to
        ``t`` (the command time): the next advance lands at t + dwell. The
        rebase keeps the schedule monotonic when the dwell shrinks.
        """
        self.dwell_ms = max(
            DWELL_MIN_MS, min(DWELL_MAX_MS, self.dwell_ms + DWELL_STEP_MS * delta_steps)
        )
        if self.scan is not None:
            self.scan.dwell_ms = self.dwell_ms
            if t is not None:
                self.scan.last_advance_t = max(self.scan.last_advance_t, t)
        return self.dwell_ms

    # -- marks ----------------------------------------------------------------

    def set_error_mark(self, addr: CellAddress, marked: bool, t: int) -> list[ActivityEvent]:
        addr = self._checked(addr)
        if marked:
            self.error_marks.add(addr)
            return [ActivityEvent(t, EventKind.MARK_ERROR, addr)]
        self.error_marks.discard(addr)
        return [ActivityEvent(t, EventKind.UNMARK_ERROR, addr)]
