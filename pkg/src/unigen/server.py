"""HTTP surface over the run store: JSON API under /api plus optional
static hosting for the web console."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .automation import IoError, PathEscape
from .debugging import EmptyReport, PatchTargetsUnknownFile, StaleBase
from .gateway import GatewayConfigError, ProviderError, GatewayTimeout, ReplayMiss
from .planning import EmptyRequirement
from .runs import RunOptions, RunStore, TerminalRun, UnknownFile, UnknownRun, WrongStage

_ERROR_STATUS = (
    (EmptyRequirement, 400),
    (EmptyReport, 400),
    (UnknownRun, 404),
    (UnknownFile, 404),
    (TerminalRun, 409),
    (WrongStage, 409),
    (StaleBase, 409),
    (PatchTargetsUnknownFile, 422),
    (PathEscape, 422),
    (GatewayConfigError, 500),
    (ReplayMiss, 500),
    (ProviderError, 502),
    (GatewayTimeout, 504),
    (IoError, 500),
)


def _error_response(exc: Exception) -> JSONResponse:
    for error_type, status in _ERROR_STATUS:
        if isinstance(exc, error_type):
            return JSONResponse(
                status_code=status,
                content={"code": type(exc).__name__, "message": str(exc)},
            )
    return JSONResponse(
        status_code=500,
        content={"code": type(exc).__name__, "message": str(exc)},
    )


def create_app(store: RunStore, console_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="unigen", docs_url=None, redoc_url=None)

    async def handle_known(request: Request, exc: Exception) -> JSONResponse:  # noqa: ARG001
        return _error_response(exc)

    for error_type, _ in _ERROR_STATUS:
        app.add_exception_handler(error_type, handle_known)

    @app.post("/api/runs")
    def create_run(body: dict):
        requirement = body.get("requirement", "")
        raw = body.get("options") or {}
        options = RunOptions(
            codegen_mode=raw.get("codegenMode", "llm"),
            gateway_mode=raw.get("gatewayMode", "live"),
            transcript=Path(raw["transcript"]) if raw.get("transcript") else None,
            model=raw.get("model"),
        )
        run_id = store.create_run(requirement, options)
        return {"id": run_id}

    @app.get("/api/runs")
    def list_runs():
        return {"runs": [run.to_json() for run in store.list_runs()]}

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str):
        run = store.get_run(run_id)
        events = store.events(run_id)
        return {"run": run.to_json(), "events": [e.to_json() for e in events]}

    @app.post("/api/runs/{run_id}/advance")
    def advance(run_id: str, body: dict | None = None):
        auto = bool((body or {}).get("auto"))
        run = store.advance(run_id, auto=auto)
        return {"run": run.to_json()}

    @app.get("/api/runs/{run_id}/events")
    def events(run_id: str, since: int = 0):
        return {"events": [e.to_json() for e in store.events(run_id, since=since)]}

    @app.get("/api/runs/{run_id}/files")
    def list_files(run_id: str):
        return {"files": store.list_files(run_id)}

    @app.get("/api/runs/{run_id}/files/{path:path}")
    def read_file(run_id: str, path: str):
        return {"path": path, "content": store.read_file(run_id, path)}

    @app.post("/api/runs/{run_id}/debug")
    def debug(run_id: str, body: dict):
        summary = store.debug_message(
            run_id, body.get("message", ""), body.get("log"))
        return summary

    if console_dir is not None and Path(console_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(console_dir), html=True),
                  name="console")

    return app
