"""Load generated desktop View/runtime modules without a display.

The generated view modules keep toolkit imports inside build(), so
importing them is side-effect free; the declarative WIDGETS table is the
inventory the toolkit code instantiates.  Argv parity runs the emitted
runtime's command builder against scripted widget states and compares
with a reference transcript from the generator's own harness.
"""

from __future__ import annotations

import importlib.util
import uuid
from pathlib import Path


class SmokeError(Exception):
    pass


class ImportFailure(SmokeError):
    pass


class InventoryMismatch(SmokeError):
    pass


class ArgvMismatch(SmokeError):
    pass


def load_module(path: Path, name: str | None = None):
    path = Path(path)
    if name is None:
        name = f"generated_{path.stem}_{uuid.uuid4().hex[:8]}"
    module_spec = importlib.util.spec_from_file_location(name, path)
    if module_spec is None or module_spec.loader is None:
        raise ImportFailure(f"{path}: cannot build an import spec")
    module = importlib.util.module_from_spec(module_spec)
    try:
        module_spec.loader.exec_module(module)
    except Exception as exc:
        raise ImportFailure(
            f"{path}: {exc.__class__.__name__}: {exc}"
        ) from exc
    return module


def smoke_load(tree_dir: Path, states: list[dict],
               reference_argvs: list[list[str]]) -> dict:
    """Import view + runtime headlessly; verify inventory and argv parity."""
    tree_dir = Path(tree_dir)
    view = load_module(tree_dir / "view.py")
    runtime = load_module(tree_dir / "mvp_runtime.py")
    spec = runtime.load_spec(tree_dir / "plugin_spec.json")

    inventory = list(view.widget_ids())
    spec_ids = [w["id"] for w in spec["widgets"]]
    if inventory != spec_ids:
        raise InventoryMismatch(
            f"view declares {inventory}, spec declares {spec_ids}"
        )

    argvs = [list(runtime.build_command(spec, dict(s))) for s in states]
    if argvs != [list(a) for a in reference_argvs]:
        raise ArgvMismatch(f"runtime built {argvs}, reference is {reference_argvs}")

    return {"inventory": inventory, "argvs": argvs}


def command_builder_call_sites(tree_dir: Path) -> dict[str, int]:
    """Occurrences of the command-builder entry point per generated file."""
    hits: dict[str, int] = {}
    for path in sorted(Path(tree_dir).glob("*.py")):
        count = path.read_text(encoding="utf-8").count("build_command(")
        if count:
            hits[path.name] = count
    return hits


def scripted_states(spec: dict) -> list[dict]:
    """Two deterministic widget states per spec: sparse and fully set.

    Independent of the generator's own test helpers on purpose.
    """
    sparse: dict = {}
    full: dict = {}
    for flag in spec["flags"]:
        widget_id = flag["widget_id"]
        kind = flag["kind"]
        if kind == "bool":
            full[widget_id] = True
        elif kind == "int":
            full[widget_id] = "7"
        elif kind == "float":
            full[widget_id] = "0.25"
        elif kind == "enum":
            full[widget_id] = flag["enum_choices"][0]
        elif kind == "infile":
            full[widget_id] = "input.dat"
        else:
            full[widget_id] = "text value"
        required = (
            kind == "infile" and flag["default"] == ""
            and flag["label"].endswith("*")
        )
        if required:
            sparse[widget_id] = "required.dat"
    return [sparse, full]
