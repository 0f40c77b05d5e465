"""WebSocket session service speaking the duplex JSON wire protocol.

One connection drives one audit session. Client frames::

    {"type": "command", "text": "jump green", "t": 12345}
    {"type": "load"}           -> workbook + state snapshot
    {"type": "tick", "t": 500} -> manual scan clock (always accepted)
    {"type": "end"}            -> persist the activity log, close

Server frames: ``event`` (one per activity event), ``state`` (snapshot
after every command and tick batch), ``workbook``, ``error``, ``ended``.
Command timestamps are session-relative ms; omitted timestamps fall back
to the server clock. Unless started with a manual clock, a background
ticker advances active scans in real time.
"""

from __future__ import annotations

import asyncio
import json
import time
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, JSONResponse

from . import tcat, workbook as wbmod
from .session import AuditSession
from .tcat import ActivityEvent, Technology
from .workbook import Workbook

TICK_INTERVAL_S = 0.1


def event_frame(ev: ActivityEvent) -> dict:
    return {
        "type": "event",
        "t": ev.t,
        "k": ev.kind.value,
        "sheet": ev.addr.sheet if ev.addr else None,
        "cell": ev.addr.a1 if ev.addr else None,
        "p": ev.payload,
    }


def state_frame(session: AuditSession) -> dict:
    nav = session.nav
    top = nav.viewport.top_left
    return {
        "type": "state",
        "cursor": nav.cursor.text,
        "colors": [
            {"c": e.color.value, "cell": e.target.text, "visible": e.visible}
            for e in nav.color_map
        ],
        "legend": nav.legend_visible,
        "dwell_ms": nav.dwell_ms,
        "marks": sorted(a.text for a in nav.error_marks),
        "scan": (
            {"direction": nav.scan.direction.value, "smart": nav.scan.smart}
            if nav.scan
            else None
        ),
        "viewport": {
            "sheet": top.sheet,
            "col": top.col,
            "row": top.row,
            "cols": nav.viewport.cols,
            "rows": nav.viewport.rows,
        },
    }


def workbook_frame(workbook: Workbook) -> dict:
    return {"type": "workbook", "workbook": json.loads(wbmod.dumps(workbook))}


class _Clock:
    """Session-relative ms; replaced by client ticks under --manual-clock."""

    def __init__(self) -> None:
        self.origin = time.monotonic()

    def now_ms(self) -> int:
        return int((time.monotonic() - self.origin) * 1000)


def create_app(
    workbook: Workbook,
    technology: Technology = Technology.IVOICE,
    log_dir: str | Path | None = None,
    manual_clock: bool = False,
    dwell_ms: int = 1000,
    smart_scan: bool = False,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="gridpilot session service")
    front = Path(frontend_dir) if frontend_dir else None

    @app.get("/")
    async def index():
        if front and (front / "index.html").exists():
            return FileResponse(front / "index.html")
        return JSONResponse({"service": "gridpilot", "connect": "/session"})

    @app.get("/app.js")
    async def app_js():
        if front and (front / "app.js").exists():
            return FileResponse(front / "app.js", media_type="text/javascript")
        return JSONResponse({"error": "no frontend build"}, status_code=404)

    @app.websocket("/session")
    async def session_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        clock = _Clock()
        session = AuditSession(
            workbook,
            technology=technology,
            dwell_ms=dwell_ms,
            smart_scan=smart_scan,
            t0=0,
        )
        send_lock = asyncio.Lock()  # keeps ticker and handler frames ordered

        async def send(frame_obj: dict) -> None:
            async with send_lock:
                await ws.send_json(frame_obj)

        async def send_events(events: list[ActivityEvent]) -> None:
            for ev in events:
                await send(event_frame(ev))

        def frame_time(frame: dict) -> int:
            raw = frame.get("t")
            return clock.now_ms() if raw is None else int(raw)

        async def ticker() -> None:
            while True:
                await asyncio.sleep(TICK_INTERVAL_S)
                if session.nav.scan is not None:
                    events = session.tick(clock.now_ms())
                    if events:
                        await send_events(events)
                        await send(state_frame(session))

        tick_task = asyncio.create_task(ticker()) if not manual_clock else None
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    frame = json.loads(raw)
                    if not isinstance(frame, dict):
                        raise ValueError("frame must be an object")
                    kind = frame.get("type")
                    if kind == "command":
                        result = session.issue(str(frame.get("text", "")), frame_time(frame))
                        await send_events(result.events)
                        if not result.ok:
                            await send({"type": "error", "code": result.error_code})
                        await send(state_frame(session))
                    elif kind == "tick":
                        events = session.tick(frame_time(frame))
                        await send_events(events)
                        await send(state_frame(session))
                    elif kind == "load":
                        await send(workbook_frame(workbook))
                        await send(state_frame(session))
                    elif kind == "end":
                        session.end(frame_time(frame))
                        path = _persist(session, log_dir)
                        await send({"type": "ended", "log_path": str(path) if path else None})
                        break
                    else:
                        raise ValueError(f"unknown type {kind!r}")
                except (json.JSONDecodeError, ValueError, TypeError) as exc:
                    await send({"type": "error", "code": "BadFrame", "message": str(exc)})
        except WebSocketDisconnect:
            session.end(clock.now_ms() if not manual_clock else session.log.last_t)
            _persist(session, log_dir)
        finally:
            if tick_task:
                tick_task.cancel()

    return app


def _persist(session: AuditSession, log_dir: str | Path | None) -> Path | None:
    if log_dir is None:
        return None
    directory = Path(log_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"session-{session.log.session_id}.jsonl"
    tcat.save(session.log, path)
    return path


def serve(
    workbook: Workbook,
    port: int,
    host: str = "127.0.0.1",
    **app_kwargs,
) -> None:
    """Run the session service until interrupted."""
    import uvicorn

    app = create_app(workbook, **app_kwargs)
    uvicorn.run(app, host=host, port=port, log_level="warning")
