"""Interactive terminal audit session with a text grid renderer.

The grid shows the viewport window; the cursor cell is bracketed, colored
reference targets are tagged with a letter (B G P R L O U), marked cells
get a ``!``. Scans advance on the wall clock between prompts.
"""

from __future__ import annotations

import time

from .engine import ColorName, NavSession
from .session import AuditSession
from .tcat import Technology
from .workbook import CellKind, Workbook, format_a1

_COLOR_TAGS = {
    ColorName.BLUE: "B",
    ColorName.GREEN: "G",
    ColorName.PINK: "P",
    ColorName.RED: "R",
    ColorName.LIME: "L",
    ColorName.ORANGE: "O",
    ColorName.PURPLE: "U",
}
_CELL_W = 11


def _cell_text(nav: NavSession, col: int, row: int) -> str:
    sheet = nav.workbook.sheet(nav.cursor.sheet)
    content = sheet.cell(col, row)
    if content.kind is CellKind.BLANK:
        body = ""
    elif content.kind is CellKind.FORMULA:
        body = content.value
    elif content.fmt:
        body = f"{content.fmt}{content.value}"
    else:
        body = content.value
    return body[: _CELL_W - 3]


def render_grid(nav: NavSession) -> str:
    top = nav.viewport.top_left
    tags = {
        (e.target.col, e.target.row): _COLOR_TAGS[e.color]
        for e in reversed(nav.color_map)
        if e.visible
    }
    lines = []
    header = " " * 5 + "".join(
        f"{format_a1(c, 1)[:-1]:^{_CELL_W}}" for c in range(top.col, top.col + nav.viewport.cols)
    )
    lines.append(header)
    for row in range(top.row, top.row + nav.viewport.rows):
        cells = []
        for col in range(top.col, top.col + nav.viewport.cols):
            body = _cell_text(nav, col, row)
            tag = tags.get((col, row), "")
            mark = "!" if any(
                m.col == col and m.row == row and m.sheet.casefold() == top.sheet.casefold()
                for m in nav.error_marks
            ) else ""
            deco = f"{tag}{mark}"
            text = f"{deco}{body}" if deco else body
            if (col, row) == (nav.cursor.col, nav.cursor.row):
                cells.append(f"[{text:^{_CELL_W - 2}}]")
            else:
                cells.append(f" {text:<{_CELL_W - 2}} ")
        lines.append(f"{row:>4} " + "".join(cells))
    return "\n".join(lines)


def render_status(nav: NavSession) -> str:
    lines = [f"cursor {nav.cursor.text}   dwell {nav.dwell_ms} ms"
             + (f"   scanning {nav.scan.direction.value}" if nav.scan else "")]
    offscreen = [e for e in nav.color_map if not e.visible]
    if offscreen:
        lines.append(
            "off-screen: " + ", ".join(f"{e.color.value}->{e.target.text}" for e in offscreen)
        )
    if nav.legend_visible:
        entries = [f"{_COLOR_TAGS[e.color]}={e.color.value}:{e.target.text}" for e in nav.color_map]
        lines.append("colours: " + (", ".join(entries) if entries else "(none)"))
    return "\n".join(lines)


def repl(
    workbook: Workbook,
    technology: Technology = Technology.IVOICE,
    dwell_ms: int = 1000,
    smart_scan: bool = False,
    log_path: str | None = None,
) -> None:
    """Drive an audit session over stdin/stdout until 'quit'."""
    from . import tcat

    session = AuditSession(
        workbook, technology=technology, dwell_ms=dwell_ms, smart_scan=smart_scan
    )
    origin = time.monotonic()

    def now_ms() -> int:
        return int((time.monotonic() - origin) * 1000)

    print(f"gridpilot audit session {session.log.session_id} ({technology.value})")
    print("type commands ('jump green', 'scan down', ...); 'quit' to finish\n")
    while True:
        session.tick(now_ms())
        print(render_grid(session.nav))
        print(render_status(session.nav))
        try:
            line = input("> ").strip()
        except EOFError:
            break
        if line.lower() in ("quit", "exit"):
            break
        if not line:
            continue
        result = session.issue(line, now_ms())
        if not result.ok:
            print(f"!! {result.error_code}")
        print()
    session.end(now_ms())
    if log_path:
        tcat.save(session.log, log_path)
        print(f"activity log written to {log_path}")
