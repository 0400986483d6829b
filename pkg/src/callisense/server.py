"""Read-only HTTP API over a directory of processed sessions.

The index maps session ids to files and is rebuilt wholesale (startup and
POST /api/refresh), never mutated in place, so concurrent readers always see
a complete index. Session and comparison responses are the exact serialized
bytes the CLI produces.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .compare import DEFAULT_GRID_MS, DEFAULT_SAMPLES, build_report, serialize_report
from .errors import CalliSenseError
from .ingest import read_pgm
from .model import Session, parse_session

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IndexEntry:
    path: Path
    session: Session
    mtime: float


class SessionStore:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self._index: dict[str, IndexEntry] = {}
        self.refresh()

    def refresh(self) -> int:
        index: dict[str, IndexEntry] = {}
        for path in sorted(self.data_dir.glob("*.json")):
            try:
                session = parse_session(path.read_text(encoding="utf-8"))
            except CalliSenseError as exc:
                log.warning("skipping %s: %s", path.name, exc)
                continue
            if session.id in index:
                log.warning("skipping %s: duplicate session id %r", path.name, session.id)
                continue
            index[session.id] = IndexEntry(path=path, session=session, mtime=path.stat().st_mtime)
        self._index = index  # atomic swap; readers never see a partial index
        return len(index)

    def ids(self) -> list[str]:
        return list(self._index.keys())

    def get(self, session_id: str) -> IndexEntry | None:
        return self._index.get(session_id)

    def glyph_bits(self, entry: IndexEntry):
        img = read_pgm(entry.path.parent / entry.session.glyph_mask)
        return img < 128


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def create_app(data_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    store = SessionStore(data_dir)
    app = FastAPI(title="callisense", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.store = store

    @app.get("/api/sessions")
    def list_sessions():
        return [
            {
                "id": e.session.id,
                "role": e.session.role,
                "character_label": e.session.character_label,
                "stroke_count": len(e.session.strokes),
            }
            for e in (store.get(i) for i in store.ids())
        ]

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        entry = store.get(session_id)
        if entry is None:
            return _error(404, f"unknown session {session_id!r}")
        return Response(content=entry.path.read_bytes(), media_type="application/json")

    @app.get("/api/compare")
    def get_comparison(
        teacher: str,
        student: str,
        samples: int = DEFAULT_SAMPLES,
        grid_ms: int = DEFAULT_GRID_MS,
    ):
        t_entry = store.get(teacher)
        if t_entry is None:
            return _error(404, f"unknown session {teacher!r}")
        s_entry = store.get(student)
        if s_entry is None:
            return _error(404, f"unknown session {student!r}")
        if not t_entry.session.strokes or not s_entry.session.strokes:
            return _error(422, "cannot compare a session with zero strokes")
        try:
            report = build_report(
                t_entry.session,
                s_entry.session,
                store.glyph_bits(t_entry),
                store.glyph_bits(s_entry),
                n_samples=samples,
                grid_ms=grid_ms,
            )
        except CalliSenseError as exc:
            return _error(422, str(exc))
        return Response(content=serialize_report(report).encode("utf-8"),
                        media_type="application/json")

    @app.get("/api/sessions/{session_id}/frames/{n}")
    def get_frame(session_id: str, n: int):
        entry = store.get(session_id)
        if entry is None:
            return _error(404, f"unknown session {session_id!r}")
        frames_dir = entry.path.parent / f"{session_id}.frames"
        if not frames_dir.is_dir():
            return _error(404, "frames not retained")
        frame = frames_dir / f"{n:06d}.png"
        if n < 0 or not frame.is_file():
            return _error(404, f"no frame {n}")
        return FileResponse(frame, media_type="image/png")

    @app.post("/api/refresh")
    def refresh():
        return {"sessions": store.refresh()}

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app


def serve(data_dir: str | Path, port: int, ui_dir: str | Path | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(data_dir, ui_dir), host="127.0.0.1", port=port, log_level="warning")
