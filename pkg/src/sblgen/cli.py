"""The generator command: designer inputs in, spec plus plugin trees out.

Writes the formal specification to ``step2_formal_spec/<app>.spec.json``
under the working directory, then (unless --spec-only) emits and
packages one tree per requested format into --gui-output, with
per-backend subdirectories and the platform archives alongside.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import SblgenError
from .builder import build_spec
from .codegen import BACKENDS, generate, package, resolve_archive_names
from .flags import parse_flags_file
from .layout import classify_areas, parse_ui
from .spec import MetaBlock, to_json

STEP2_DIR = "step2_formal_spec"
DEFAULT_GUI_OUTPUT = "generated_plugins"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sbl-gui-generator",
        description="Generate GUI plugins for a command-line executable from "
                    "a designer layout and flag-selection files.",
    )
    ap.add_argument("--ui", required=True, type=Path,
                    help="designer layout file (.ui)")
    ap.add_argument("--exe", required=True,
                    help="wrapped executable name")
    ap.add_argument("--flags", required=True, type=Path,
                    help="input-area flag selection file")
    ap.add_argument("--update-flags", type=Path,
                    help="optional update-area flag selection file")
    ap.add_argument("--post-script", required=True,
                    help="post-analysis script path")
    ap.add_argument("--format", nargs="+", choices=sorted(BACKENDS),
                    metavar="FORMAT", default=[],
                    help="backends to generate (one or more of: %s)"
                         % " ".join(sorted(BACKENDS)))
    ap.add_argument("--gui-output", type=Path, default=Path(DEFAULT_GUI_OUTPUT),
                    help="output directory for generated code "
                         "(default: %(default)s)")
    ap.add_argument("--spec-only", action="store_true",
                    help="stop after writing the formal specification")
    ap.add_argument("--app-name",
                    help="application name (default: exe name without .exe)")
    return ap


def derive_app_name(exe: str) -> str:
    name = Path(exe).name
    if name.endswith(".exe"):
        name = name[: -len(".exe")]
    return name


def _read(path: Path, stage: str) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SblgenError(f"{stage}: cannot read {path}: {exc}") from exc


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if not args.spec_only and not args.format:
        ap.error("--format is required unless --spec-only is given")

    formats: list[str] = []
    for fmt in args.format:
        if fmt not in formats:
            formats.append(fmt)

    try:
        tree = _stage("layout", lambda: parse_ui(_read(args.ui, "layout")))
        areas = _stage("layout", lambda: classify_areas(tree))
        input_flags = _stage(
            "flags",
            lambda: parse_flags_file(_read(args.flags, "flags"), "input"),
        )
        if args.update_flags:
            update_flags = _stage(
                "update-flags",
                lambda: parse_flags_file(
                    _read(args.update_flags, "update-flags"), "update"
                ),
            )
        else:
            update_flags = []

        meta = MetaBlock(
            app_name=args.app_name or derive_app_name(args.exe),
            exe=args.exe,
            post_script=args.post_script,
        )
        spec = _stage(
            "spec-builder",
            lambda: build_spec(tree, areas, input_flags, update_flags, meta),
        )

        step2_dir = Path(STEP2_DIR)
        step2_dir.mkdir(parents=True, exist_ok=True)
        spec_path = step2_dir / f"{meta.app_name}.spec.json"
        spec_path.write_text(to_json(spec), encoding="utf-8")
        print(f"wrote {spec_path}")

        if args.spec_only:
            return 0

        archive_names = resolve_archive_names(formats)
        args.gui_output.mkdir(parents=True, exist_ok=True)
        for fmt in formats:
            generated = _stage(f"codegen[{fmt}]", lambda f=fmt: generate(spec, f))
            archive = _stage(
                f"codegen[{fmt}]",
                lambda g=generated, f=fmt: package(
                    g, args.gui_output, archive_name=archive_names[f]
                ),
            )
            print(f"wrote {args.gui_output / fmt}/ and {archive}")
    except SblgenError as exc:
        print(f"sbl-gui-generator: error: {exc}", file=sys.stderr)
        return 1
    return 0


def _stage(name: str, thunk):
    try:
        return thunk()
    except SblgenError as exc:
        raise SblgenError(f"{name}: {exc}") from exc


if __name__ == "__main__":
    sys.exit(main())
