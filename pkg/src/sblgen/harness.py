"""Headless verification engine.

Interprets a GuiSpec directly (no GUI), drives the presenter with a
scripted action list against pluggable fake executables, and records a
Transcript rich enough to compare against independent oracles.  Scripts
are data (JSON lines, one action per line) so they double as a
regression corpus.  Also runnable as ``python -m sblgen.harness``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import SblgenError
from .presenter import (
    IDLE,
    PresenterError,
    Runner,
    RunnerConfig,
    RunSession,
    build_command,
)
from .spec import GuiSpec, from_json

ACTION_OPS = ("set", "click_run", "set_update", "apply_update", "expect")


class ScriptError(SblgenError):
    pass


@dataclass
class Transcript:
    argvs: list[list[str]] = field(default_factory=list)
    exe_runs: int = 0
    post_runs: int = 0
    manifests: list[dict] = field(default_factory=list)
    refreshes: list[dict] = field(default_factory=list)
    final_state: str = IDLE
    errors: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "argvs": self.argvs,
            "exe_runs": self.exe_runs,
            "post_runs": self.post_runs,
            "manifests": self.manifests,
            "refreshes": self.refreshes,
            "final_state": self.final_state,
            "errors": self.errors,
        }


def simulate(
    spec: GuiSpec,
    actions: list[dict],
    *,
    exe: Path,
    post_script: Path,
    session_root: Path,
    timeout: float = 60.0,
) -> Transcript:
    """Run a scripted interaction; presenter errors are recorded, not thrown."""
    runner = Runner(
        spec,
        RunnerConfig(exe_path=Path(exe), post_script=Path(post_script),
                     timeout=timeout),
    )
    transcript = Transcript()
    state: dict = {}
    pending_updates: dict[str, str] = {}
    session: RunSession | None = None
    update_tokens = {b.flag.token for b in spec.update_flags}

    for i, action in enumerate(actions):
        op = action.get("op")
        where = f"action[{i}]"
        if op == "set":
            widget_id = action.get("widget")
            if spec.widget_by_id(widget_id) is None:
                raise ScriptError(f"{where}: unknown widget {widget_id!r}")
            state[widget_id] = action.get("value")
        elif op == "click_run":
            try:
                plan = build_command(spec, state)
                transcript.argvs.append(list(plan.argv))
                session = runner.new_session(Path(session_root))
                runner.execute(session, state)
                if session.manifest is not None:
                    transcript.manifests.append(session.manifest.to_dict())
            except PresenterError as exc:
                transcript.errors.append(f"{where}: {exc}")
        elif op == "set_update":
            token = action.get("token")
            if token not in update_tokens:
                raise ScriptError(f"{where}: unknown update flag {token!r}")
            pending_updates[token] = action.get("value")
        elif op == "apply_update":
            if session is None:
                transcript.errors.append(f"{where}: no session to update")
                continue
            try:
                refresh = runner.apply_update(session, dict(pending_updates))
                transcript.refreshes.append(refresh.to_dict())
                if session.manifest is not None:
                    transcript.manifests.append(session.manifest.to_dict())
                pending_updates.clear()
            except PresenterError as exc:
                transcript.errors.append(f"{where}: {exc}")
        elif op == "expect":
            actual = session.state if session is not None else IDLE
            if actual != action.get("state"):
                transcript.errors.append(
                    f"{where}: expected state {action.get('state')!r}, got {actual!r}"
                )
        else:
            raise ScriptError(f"{where}: unknown op {op!r}")

    transcript.final_state = session.state if session is not None else IDLE
    if session is not None:
        transcript.exe_runs = _read_counter(session.run_dir / "exe_runs.txt")
        transcript.post_runs = _read_counter(session.run_dir / "post_runs.txt")
    return transcript


def _read_counter(path: Path) -> int:
    try:
        return int(path.read_text())
    except (OSError, ValueError):
        return 0


def oracle_command(spec: GuiSpec, state: dict) -> list[str]:
    """Deliberately naive re-derivation of the argv rules, for differential tests.

    Written against the rules, not against the presenter implementation;
    used only by tests.
    """
    argv = [spec.meta.exe]
    for binding in spec.flags:
        flag = binding.flag
        value = state[binding.widget_id] if binding.widget_id in state else None
        if flag.kind == "bool":
            if value is True:
                argv = argv + [flag.token]
        else:
            if isinstance(value, str) and value.strip() != "":
                argv = argv + [flag.token] + [value.strip()]
    return argv


def parse_script(text: str) -> list[dict]:
    """JSON-lines action script: one action object per non-blank line."""
    actions = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            action = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ScriptError(f"line {lineno}: not JSON: {exc}") from exc
        if not isinstance(action, dict):
            raise ScriptError(f"line {lineno}: action must be an object")
        actions.append(action)
    return actions


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="python -m sblgen.harness",
        description="Replay a JSON-lines interaction script against a spec "
                    "and write the resulting transcript.",
    )
    ap.add_argument("--spec", required=True, type=Path)
    ap.add_argument("--script", required=True, type=Path)
    ap.add_argument("--exe", required=True, type=Path)
    ap.add_argument("--post-script", required=True, type=Path)
    ap.add_argument("--session-root", required=True, type=Path)
    ap.add_argument("--out", type=Path, help="transcript output (default stdout)")
    args = ap.parse_args(argv)

    spec = from_json(args.spec.read_text(encoding="utf-8"))
    actions = parse_script(args.script.read_text(encoding="utf-8"))
    transcript = simulate(
        spec, actions,
        exe=args.exe, post_script=args.post_script,
        session_root=args.session_root,
    )
    payload = json.dumps(transcript.to_dict(), indent=2) + "\n"
    if args.out:
        args.out.write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
