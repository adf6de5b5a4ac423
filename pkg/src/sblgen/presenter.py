"""Backend-neutral Model and Presenter semantics.

Owns widget state validation, argv construction, the run lifecycle
(Idle -> Running -> PostAnalysis -> Ready/Failed), post-analysis
invocation, manifest validation, and update-area refresh computation.
Argv is always passed as a vector; nothing here interprets shell
metacharacters.
"""

from __future__ import annotations

import json
import shutil
import subprocess
import sys
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import SblgenError
from .spec import GuiSpec

STDERR_TAIL_BYTES = 64 * 1024
DEFAULT_TIMEOUT = 600.0

IDLE = "Idle"
RUNNING = "Running"
POST_ANALYSIS = "PostAnalysis"
READY = "Ready"
FAILED = "Failed"

_LEGAL_TRANSITIONS = {
    (IDLE, RUNNING),
    (RUNNING, POST_ANALYSIS),
    (RUNNING, FAILED),
    (POST_ANALYSIS, READY),
    (POST_ANALYSIS, FAILED),
    (READY, POST_ANALYSIS),
}

ENGINE_HINTS = ("molecular", "mesh")


class PresenterError(SblgenError):
    pass


class StateTypeMismatch(PresenterError):
    pass


class MissingRequiredFile(PresenterError):
    pass


class ExeNotFound(PresenterError):
    pass


class SpawnFailure(PresenterError):
    pass


class RunTimeout(PresenterError):
    pass


class PostScriptFailure(PresenterError):
    pass


class ManifestMissing(PresenterError):
    pass


class ManifestInvalid(PresenterError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class IllegalTransition(PresenterError):
    pass


class NotReady(PresenterError):
    pass


class UnknownUpdateToken(PresenterError):
    pass


@dataclass(frozen=True)
class CommandPlan:
    argv: tuple[str, ...]
    workdir: Path


@dataclass(frozen=True)
class ManifestSlot:
    media: str
    path: str


@dataclass(frozen=True)
class ViewerEntry:
    engine_hint: str
    path: str


@dataclass(frozen=True)
class ArtifactManifest:
    slots: dict[str, ManifestSlot]
    viewer: tuple[ViewerEntry, ...] = ()

    def to_dict(self) -> dict:
        return {
            "slots": {
                name: {"media": s.media, "path": s.path}
                for name, s in self.slots.items()
            },
            "viewer": [
                {"engine_hint": v.engine_hint, "path": v.path} for v in self.viewer
            ],
        }


@dataclass(frozen=True)
class RefreshSet:
    targets: frozenset[str]
    slots_to_refresh: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "targets": [t for t in ("outputs", "viewer") if t in self.targets],
            "slots_to_refresh": list(self.slots_to_refresh),
        }


@dataclass
class RunSession:
    """Single-writer run state; callers serialize transitions per session."""

    id: str
    run_dir: Path
    state: str = IDLE
    manifest: Optional[ArtifactManifest] = None
    exit_code: Optional[int] = None
    stderr_tail: str = ""
    update_values: dict[str, str] = field(default_factory=dict)
    runner: Optional["Runner"] = field(default=None, repr=False)

    def transition(self, to: str) -> None:
        if (self.state, to) not in _LEGAL_TRANSITIONS:
            raise IllegalTransition(f"illegal transition {self.state} -> {to}")
        self.state = to


# -- argv construction --------------------------------------------------------


def build_command(spec: GuiSpec, state: dict, workdir: Path = Path(".")) -> CommandPlan:
    """Deterministic argv from (spec, state); spec order, never state order."""
    _validate_state(spec, state)
    argv: list[str] = [spec.meta.exe]
    for binding in spec.flags:
        flag = binding.flag
        value = state.get(binding.widget_id)
        if flag.kind == "bool":
            if value is True:
                argv.append(flag.token)
        elif value is not None:
            text = value.strip()
            if text:
                argv.extend((flag.token, text))
    return CommandPlan(tuple(argv), workdir)


def _validate_state(spec: GuiSpec, state: dict) -> None:
    bound = {b.widget_id: b.flag for b in spec.flags}
    for widget_id, value in state.items():
        flag = bound.get(widget_id)
        if flag is None:
            raise StateTypeMismatch(f"unknown or unbound widget id {widget_id!r}")
        if flag.kind == "bool":
            if not isinstance(value, bool):
                raise StateTypeMismatch(
                    f"{widget_id}: checkbox state must be boolean, got {value!r}"
                )
            continue
        if not isinstance(value, str):
            raise StateTypeMismatch(
                f"{widget_id}: value must be text, got {type(value).__name__}"
            )
        text = value.strip()
        if not text:
            continue
        if flag.kind == "int":
            try:
                int(text)
            except ValueError:
                raise StateTypeMismatch(
                    f"{widget_id}: not an integer: {text!r}"
                ) from None
        elif flag.kind == "float":
            try:
                float(text)
            except ValueError:
                raise StateTypeMismatch(
                    f"{widget_id}: not a number: {text!r}"
                ) from None
        elif flag.kind == "enum" and text not in flag.enum_choices:
            raise StateTypeMismatch(
                f"{widget_id}: {text!r} not among {flag.enum_choices}"
            )

    for binding in spec.flags:
        flag = binding.flag
        required = (
            flag.kind == "infile" and flag.default == "" and flag.label.endswith("*")
        )
        if required:
            value = state.get(binding.widget_id)
            if not isinstance(value, str) or not value.strip():
                raise MissingRequiredFile(
                    f"required input file {flag.token!r} is empty"
                )


def update_args(spec: GuiSpec, update_values: dict[str, str]) -> list[str]:
    """Update-flag argv contribution (same rules as input flags, text values)."""
    out: list[str] = []
    for binding in spec.update_flags:
        flag = binding.flag
        value = (update_values.get(flag.token) or "").strip()
        if flag.kind == "bool":
            if value.lower() == "true":
                out.append(flag.token)
        elif value:
            out.extend((flag.token, value))
    return out


def default_update_values(spec: GuiSpec) -> dict[str, str]:
    return {b.flag.token: b.flag.default for b in spec.update_flags}


# -- execution ----------------------------------------------------------------


@dataclass
class RunnerConfig:
    base_dir: Path = Path(".")
    exe_path: Optional[Path] = None
    post_script: Optional[Path] = None
    timeout: float = DEFAULT_TIMEOUT


class Runner:
    """Executes one spec's runs; sessions are independent of each other."""

    def __init__(self, spec: GuiSpec, config: Optional[RunnerConfig] = None):
        self.spec = spec
        self.config = config or RunnerConfig()

    def new_session(self, session_root: Path) -> RunSession:
        session_root = Path(session_root)
        session_root.mkdir(parents=True, exist_ok=True)
        sid = uuid.uuid4().hex[:12]
        run_dir = session_root / sid
        run_dir.mkdir()
        return RunSession(
            id=sid,
            run_dir=run_dir,
            update_values=default_update_values(self.spec),
            runner=self,
        )

    def execute(self, session: RunSession, state: dict) -> RunSession:
        plan = build_command(self.spec, state, workdir=session.run_dir)
        exe = self.resolve_exe()
        session.transition(RUNNING)
        stdout_log = session.run_dir / "stdout.log"
        stderr_log = session.run_dir / "stderr.log"
        try:
            with open(stdout_log, "wb") as out, open(stderr_log, "wb") as err:
                proc = subprocess.run(
                    _spawn_argv(exe, plan.argv[1:]),
                    cwd=session.run_dir,
                    stdout=out,
                    stderr=err,
                    timeout=self.config.timeout,
                )
        except subprocess.TimeoutExpired:
            session.transition(FAILED)
            session.stderr_tail = _tail(stderr_log) + "\n[timed out]"
            raise RunTimeout(
                f"{self.spec.meta.exe} exceeded {self.config.timeout}s"
            ) from None
        except OSError as exc:
            session.transition(FAILED)
            session.stderr_tail = str(exc)
            raise SpawnFailure(f"could not launch {exe}: {exc}") from exc

        session.exit_code = proc.returncode
        session.stderr_tail = _tail(stderr_log)
        if proc.returncode != 0:
            session.transition(FAILED)
            return session

        session.transition(POST_ANALYSIS)
        try:
            self.run_post_analysis(session, session.update_values)
        except PresenterError as exc:
            # session already Failed; surface the cause for status display
            session.stderr_tail = (session.stderr_tail + f"\npost-analysis: {exc}").strip()
        return session

    def run_post_analysis(
        self, session: RunSession, update_values: dict[str, str]
    ) -> ArtifactManifest:
        if session.state not in (POST_ANALYSIS, READY):
            raise NotReady(
                f"post-analysis needs PostAnalysis or Ready, session is {session.state}"
            )
        if session.state == READY:
            session.transition(POST_ANALYSIS)

        out_dir = session.run_dir / "post"
        out_dir.mkdir(exist_ok=True)
        # only trust a manifest written by this invocation, never a stale one
        (out_dir / "manifest.json").unlink(missing_ok=True)
        script = self._resolve_post_script()
        argv = _spawn_argv(
            script,
            ["--run-dir", str(session.run_dir), "--out-dir", str(out_dir)]
            + update_args(self.spec, update_values),
        )
        post_err = session.run_dir / "post_stderr.log"
        try:
            with open(session.run_dir / "post_stdout.log", "ab") as out, open(
                post_err, "ab"
            ) as err:
                proc = subprocess.run(
                    argv,
                    cwd=session.run_dir,
                    stdout=out,
                    stderr=err,
                    timeout=self.config.timeout,
                )
        except subprocess.TimeoutExpired:
            session.transition(FAILED)
            raise PostScriptFailure(
                f"post-analysis exceeded {self.config.timeout}s"
            ) from None
        except OSError as exc:
            session.transition(FAILED)
            raise PostScriptFailure(f"could not launch {script}: {exc}") from exc

        if proc.returncode != 0:
            session.transition(FAILED)
            raise PostScriptFailure(
                f"post-analysis exited {proc.returncode}: {_tail(post_err)}"
            )

        manifest_path = out_dir / "manifest.json"
        if not manifest_path.exists():
            session.transition(FAILED)
            raise ManifestMissing(f"{manifest_path} not written by post-analysis")
        try:
            doc = json.loads(manifest_path.read_text(encoding="utf-8"))
            manifest = parse_manifest(doc, self.spec, out_dir)
        except ManifestInvalid:
            session.transition(FAILED)
            raise
        session.manifest = manifest
        session.transition(READY)
        return manifest

    def apply_update(self, session: RunSession, changed: dict[str, str]) -> RefreshSet:
        """Re-run post-analysis only; the main executable is never re-invoked."""
        if session.state != READY:
            raise NotReady(f"update needs a Ready session, got {session.state}")
        known = {b.flag.token: b.flag for b in self.spec.update_flags}
        for token in changed:
            if token not in known:
                raise UnknownUpdateToken(token)
        session.update_values.update(changed)
        self.run_post_analysis(session, session.update_values)
        targets: set[str] = set()
        for token in changed:
            targets |= known[token].refresh
        slots = tuple(self.spec.slots()) if "outputs" in targets else ()
        return RefreshSet(frozenset(targets), slots)

    def resolve_exe(self) -> Path:
        if self.config.exe_path is not None:
            path = Path(self.config.exe_path)
            if not path.is_file():
                raise ExeNotFound(str(path))
            return path
        name = self.spec.meta.exe
        candidate = Path(self.config.base_dir) / name
        if candidate.is_file():
            return candidate
        if "/" not in name:
            found = shutil.which(name)
            if found:
                return Path(found)
        raise ExeNotFound(name)

    def _resolve_post_script(self) -> Path:
        if self.config.post_script is not None:
            path = Path(self.config.post_script)
        else:
            path = Path(self.config.base_dir) / self.spec.meta.post_script
        if not path.is_file():
            raise PostScriptFailure(f"post-analysis script not found: {path}")
        return path


def start_run(
    spec: GuiSpec,
    state: dict,
    session_root: Path,
    *,
    base_dir: Path = Path("."),
    exe_path: Optional[Path] = None,
    post_script: Optional[Path] = None,
    timeout: float = DEFAULT_TIMEOUT,
) -> RunSession:
    runner = Runner(
        spec,
        RunnerConfig(
            base_dir=base_dir,
            exe_path=exe_path,
            post_script=post_script,
            timeout=timeout,
        ),
    )
    session = runner.new_session(Path(session_root))
    return runner.execute(session, state)


def run_post_analysis(session: RunSession, update_values: dict[str, str]):
    if session.runner is None:
        raise PresenterError("session has no runner attached")
    return session.runner.run_post_analysis(session, update_values)


def apply_update(spec: GuiSpec, session: RunSession, changed: dict[str, str]):
    if session.runner is None:
        raise PresenterError("session has no runner attached")
    assert session.runner.spec is spec or session.runner.spec == spec
    return session.runner.apply_update(session, changed)


# -- manifest -----------------------------------------------------------------


def parse_manifest(doc, spec: GuiSpec, out_dir: Path) -> ArtifactManifest:
    """Validate a post-analysis manifest against the spec and directory bounds."""
    if not isinstance(doc, dict):
        raise ManifestInvalid("BAD_SHAPE", "manifest must be a JSON object")
    slots_doc = doc.get("slots")
    viewer_doc = doc.get("viewer", [])
    if not isinstance(slots_doc, dict) or not isinstance(viewer_doc, list):
        raise ManifestInvalid("BAD_SHAPE", "expected {slots: {...}, viewer: [...]}")

    known = spec.slots()
    slots: dict[str, ManifestSlot] = {}
    for name, entry in slots_doc.items():
        if not isinstance(entry, dict):
            raise ManifestInvalid("BAD_SHAPE", f"slot {name!r} must be an object")
        if name not in known:
            raise ManifestInvalid("UNKNOWN_SLOT", f"slot {name!r} not in the spec")
        media = entry.get("media")
        if media != known[name]:
            raise ManifestInvalid(
                "MEDIA_MISMATCH",
                f"slot {name!r}: manifest says {media!r}, spec says {known[name]!r}",
            )
        rel = entry.get("path")
        _check_inside(rel, out_dir, f"slot {name!r}")
        slots[name] = ManifestSlot(media=media, path=rel)

    viewer: list[ViewerEntry] = []
    for i, entry in enumerate(viewer_doc):
        if not isinstance(entry, dict):
            raise ManifestInvalid("BAD_SHAPE", f"viewer[{i}] must be an object")
        hint = entry.get("engine_hint")
        if hint not in ENGINE_HINTS:
            raise ManifestInvalid(
                "BAD_ENGINE", f"viewer[{i}]: unknown engine hint {hint!r}"
            )
        rel = entry.get("path")
        _check_inside(rel, out_dir, f"viewer[{i}]")
        viewer.append(ViewerEntry(engine_hint=hint, path=rel))

    return ArtifactManifest(slots=slots, viewer=tuple(viewer))


def resolve_artifact(out_dir: Path, rel: str) -> Path:
    """Resolve a manifest-relative path, refusing escapes from out_dir."""
    _check_inside(rel, out_dir, rel, must_exist=False)
    return (Path(out_dir) / rel).resolve()


def _check_inside(rel, out_dir: Path, what: str, must_exist: bool = True) -> None:
    if not isinstance(rel, str) or not rel:
        raise ManifestInvalid("BAD_SHAPE", f"{what}: path must be a non-empty string")
    p = Path(rel)
    if p.is_absolute() or ".." in p.parts:
        raise ManifestInvalid("PATH_ESCAPE", f"{what}: {rel!r} escapes the output dir")
    resolved = (Path(out_dir) / p).resolve()
    base = Path(out_dir).resolve()
    if base != resolved and base not in resolved.parents:
        raise ManifestInvalid("PATH_ESCAPE", f"{what}: {rel!r} escapes the output dir")
    if must_exist and not resolved.is_file():
        raise ManifestInvalid("MISSING_FILE", f"{what}: {rel!r} does not exist")


def _spawn_argv(path: Path, rest) -> list[str]:
    # .py fixtures and post scripts run through the current interpreter
    if path.suffix == ".py":
        return [sys.executable, str(path), *rest]
    return [str(path), *rest]


def _tail(path: Path, limit: int = STDERR_TAIL_BYTES) -> str:
    try:
        data = path.read_bytes()
    except OSError:
        return ""
    return data[-limit:].decode("utf-8", errors="replace").strip()
