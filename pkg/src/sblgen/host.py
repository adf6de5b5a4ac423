"""HTTP host for generated web plugin trees.

One generic, spec-driven service: it serves the plugin's spec and
frontend assets, executes runs through the presenter, exposes session
state for polling, serves post-analysis artifacts, and hands out the
viewer page that the frontend reloads with cache-busting nonces.
Session directories outlive the process; restarting loses only
in-flight sessions.
"""

from __future__ import annotations

import argparse
import json
import mimetypes
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI
from fastapi.responses import FileResponse, JSONResponse, Response

from . import SblgenError
from .presenter import (
    IDLE,
    ManifestInvalid,
    MissingRequiredFile,
    PresenterError,
    Runner,
    RunnerConfig,
    RunSession,
    StateTypeMismatch,
    UnknownUpdateToken,
    build_command,
    resolve_artifact,
)
from .spec import GuiSpec, SpecError, from_json

SPEC_FILE = "plugin_spec.json"
HOST_CONFIG_FILE = "host-config.json"


class HostError(SblgenError):
    pass


@dataclass
class HostConfig:
    plugin_dir: Path
    sessions_root: Path
    listen_host: str = "127.0.0.1"
    listen_port: int = 8080
    exe_path: Optional[Path] = None
    post_script: Optional[Path] = None
    base_dir: Optional[Path] = None
    timeout: float = 600.0


def load_engine_hint(plugin_dir: Path) -> str:
    path = Path(plugin_dir) / HOST_CONFIG_FILE
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise HostError(f"unusable {HOST_CONFIG_FILE}: {exc}") from exc
    hint = doc.get("engine_hint")
    if hint not in ("molecular", "mesh"):
        raise HostError(f"{HOST_CONFIG_FILE}: unknown engine_hint {hint!r}")
    return hint


@dataclass
class _Entry:
    runner: Runner
    session: RunSession
    lock: threading.Lock = field(default_factory=threading.Lock)


def create_app(config: HostConfig) -> FastAPI:
    plugin_dir = Path(config.plugin_dir).resolve()
    spec_path = plugin_dir / SPEC_FILE
    if not spec_path.is_file():
        raise HostError(f"plugin dir has no {SPEC_FILE}: {plugin_dir}")
    spec_text = spec_path.read_text(encoding="utf-8")
    try:
        spec: GuiSpec = from_json(spec_text)
    except SpecError as exc:
        raise HostError(f"invalid plugin spec: {exc}") from exc
    engine_hint = load_engine_hint(plugin_dir)

    runner_config = RunnerConfig(
        base_dir=Path(config.base_dir) if config.base_dir else plugin_dir,
        exe_path=config.exe_path,
        post_script=config.post_script,
        timeout=config.timeout,
    )
    sessions: dict[str, _Entry] = {}
    sessions_lock = threading.Lock()

    app = FastAPI(title=spec.meta.app_name)
    app.state.gui_spec = spec
    app.state.engine_hint = engine_hint

    def get_entry(session_id: str) -> Optional[_Entry]:
        with sessions_lock:
            return sessions.get(session_id)

    @app.get("/api/spec")
    def api_spec() -> Response:
        # byte-equal pass-through of the canonical spec file
        return Response(content=spec_text, media_type="application/json")

    @app.post("/api/run")
    def api_run(payload: dict = Body(...)) -> JSONResponse:
        if isinstance(payload, dict) and "state" in payload and set(payload) <= {
            "state", "session_id",
        }:
            state = payload["state"]
            rerun_id = payload.get("session_id")
        else:
            state, rerun_id = payload, None
        if not isinstance(state, dict):
            return JSONResponse({"detail": "state must be an object"}, 400)

        if rerun_id is not None:
            entry = get_entry(rerun_id)
            if entry is None:
                return JSONResponse({"detail": "unknown session"}, 404)
            if not entry.lock.acquire(blocking=False):
                return JSONResponse({"detail": "session busy"}, 409)
            try:
                # one run per session: only a never-started session may run
                if entry.session.state != IDLE:
                    return JSONResponse(
                        {"detail": f"session is {entry.session.state}, not Idle"},
                        409,
                    )
            finally:
                entry.lock.release()

        try:
            build_command(spec, state)
        except (StateTypeMismatch, MissingRequiredFile) as exc:
            return JSONResponse({"detail": str(exc)}, 400)

        runner = Runner(spec, runner_config)
        session = runner.new_session(Path(config.sessions_root))
        entry = _Entry(runner=runner, session=session)
        with sessions_lock:
            sessions[session.id] = entry

        try:
            runner.resolve_exe()
        except PresenterError as exc:
            session.transition("Running")
            session.transition("Failed")
            session.stderr_tail = str(exc)
            return JSONResponse(
                {"detail": str(exc), "session_id": session.id}, 500
            )

        def work() -> None:
            with entry.lock:
                try:
                    runner.execute(session, state)
                except PresenterError:
                    pass  # session already carries the Failed state + detail

        threading.Thread(target=work, daemon=True).start()
        return JSONResponse({"session_id": session.id})

    @app.get("/api/session/{session_id}")
    def api_session(session_id: str) -> JSONResponse:
        entry = get_entry(session_id)
        if entry is None:
            return JSONResponse({"detail": "unknown session"}, 404)
        session = entry.session
        body: dict = {"state": session.state}
        if session.exit_code is not None:
            body["exit_code"] = session.exit_code
        if session.manifest is not None:
            body["manifest"] = session.manifest.to_dict()
        if session.stderr_tail:
            body["stderr_tail"] = session.stderr_tail
        return JSONResponse(body)

    @app.post("/api/update")
    def api_update(payload: dict = Body(...)) -> JSONResponse:
        session_id = payload.get("session_id")
        values = payload.get("values")
        if not isinstance(session_id, str) or not isinstance(values, dict):
            return JSONResponse(
                {"detail": "expected {session_id, values}"}, 400
            )
        entry = get_entry(session_id)
        if entry is None:
            return JSONResponse({"detail": "unknown session"}, 404)
        if not entry.lock.acquire(blocking=False):
            return JSONResponse({"detail": "session busy"}, 409)
        try:
            if entry.session.state != "Ready":
                return JSONResponse(
                    {"detail": f"session is {entry.session.state}, not Ready"}, 409
                )
            try:
                refresh = entry.runner.apply_update(entry.session, values)
            except UnknownUpdateToken as exc:
                return JSONResponse({"detail": f"unknown update flag {exc}"}, 400)
            except PresenterError as exc:
                return JSONResponse({"detail": str(exc)}, 500)
        finally:
            entry.lock.release()
        return JSONResponse(
            {
                "refresh": refresh.to_dict(),
                "manifest": entry.session.manifest.to_dict(),
            }
        )

    @app.get("/artifacts/{session_id}/{rel_path:path}")
    def artifacts(session_id: str, rel_path: str):
        entry = get_entry(session_id)
        if entry is None:
            return JSONResponse({"detail": "unknown session"}, 404)
        post_dir = entry.session.run_dir / "post"
        try:
            target = resolve_artifact(post_dir, rel_path)
        except ManifestInvalid:
            return JSONResponse({"detail": "not found"}, 404)
        if not target.is_file():
            return JSONResponse({"detail": "not found"}, 404)
        media_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        return FileResponse(target, media_type=media_type)

    def serve_static(base: Path, rel: str):
        candidate = (base / rel).resolve()
        if base != candidate and base not in candidate.parents:
            return JSONResponse({"detail": "not found"}, 404)
        if not candidate.is_file():
            return JSONResponse({"detail": "not found"}, 404)
        media_type = mimetypes.guess_type(candidate.name)[0] or "text/plain"
        return FileResponse(candidate, media_type=media_type)

    @app.get("/")
    def index():
        return serve_static(plugin_dir, "index.html")

    @app.get("/assets/{rel_path:path}")
    def assets(rel_path: str):
        return serve_static(plugin_dir / "assets", rel_path)

    @app.get("/viewer/")
    def viewer_page():
        # cache-busting query params are the client's business; same page always
        return serve_static(plugin_dir / "viewer", "index.html")

    return app


def serve(config: HostConfig) -> None:
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port)


def main(argv: Optional[list[str]] = None) -> int:
    ap = argparse.ArgumentParser(
        prog="python -m sblgen.host",
        description="Serve a generated web plugin tree.",
    )
    ap.add_argument("--plugin-dir", required=True, type=Path)
    ap.add_argument("--sessions-root", required=True, type=Path)
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8080)
    ap.add_argument("--exe", type=Path, help="override executable path")
    ap.add_argument("--post-script", type=Path, help="override post-analysis path")
    ap.add_argument("--base-dir", type=Path,
                    help="resolution root for exe/post-script (default plugin dir)")
    args = ap.parse_args(argv)
    serve(
        HostConfig(
            plugin_dir=args.plugin_dir,
            sessions_root=args.sessions_root,
            listen_host=args.host,
            listen_port=args.port,
            exe_path=args.exe,
            post_script=args.post_script,
            base_dir=args.base_dir,
        )
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
