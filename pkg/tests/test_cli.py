from __future__ import annotations

import hashlib
import json
import shutil
import subprocess
import tarfile
from pathlib import Path

import pytest

from sblgen.cli import derive_app_name, main

SPEC_FILE = "step2_formal_spec/sbl-intervor-ABW-atomic.spec.json"


def demo_args(demo_dir, *, formats=("pyqt", "tkinter", "panel-ngljs"), extra=()):
    args = [
        "--ui", str(demo_dir / "layout.ui"),
        "--exe", "sbl-intervor-ABW-atomic.exe",
        "--flags", str(demo_dir / "selected_flags.txt"),
        "--update-flags", str(demo_dir / "update_area_flags.txt"),
        "--post-script", "post_analysis.py",
    ]
    if formats:
        args += ["--format", *formats]
    args += list(extra)
    return args


def tree_digest(root: Path) -> dict[str, str]:
    return {
        str(p.relative_to(root)): hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(root.rglob("*")) if p.is_file()
    }


def test_example_invocation_produces_three_backends(demo_dir, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(demo_args(demo_dir)) == 0
    assert (tmp_path / SPEC_FILE).is_file()
    out = tmp_path / "generated_plugins"
    for backend in ("pyqt", "tkinter", "panel-ngljs"):
        assert (out / backend / "MANIFEST.txt").is_file()
    for archive in ("pymol.tar.gz", "vmd.tar.gz", "web.tar.gz"):
        assert (out / archive).is_file()
    assert not (out / "panel-threejs").exists()


def test_spec_only(demo_dir, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(demo_args(demo_dir, formats=(), extra=("--spec-only",))) == 0
    assert (tmp_path / SPEC_FILE).is_file()
    assert not (tmp_path / "generated_plugins").exists()


def test_spec_matches_golden(demo_dir, tmp_path, monkeypatch, golden_dir):
    monkeypatch.chdir(tmp_path)
    main(demo_args(demo_dir, formats=(), extra=("--spec-only",)))
    written = (tmp_path / SPEC_FILE).read_text(encoding="utf-8")
    assert written == (golden_dir / "intervor.spec.json").read_text(encoding="utf-8")


def test_threejs_alone_gets_plain_web_archive(demo_dir, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(demo_args(demo_dir, formats=("panel-threejs",))) == 0
    out = tmp_path / "generated_plugins"
    assert (out / "web.tar.gz").is_file()
    config = json.loads((out / "panel-threejs" / "host-config.json").read_text())
    assert config == {"engine_hint": "mesh"}


def test_both_web_formats_suffix_resolution(demo_dir, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(demo_args(demo_dir, formats=("panel-ngljs", "panel-threejs"))) == 0
    out = tmp_path / "generated_plugins"
    assert (out / "web.tar.gz").is_file()
    assert (out / "web-threejs.tar.gz").is_file()
    with tarfile.open(out / "web.tar.gz") as tar:
        hint = json.load(tar.extractfile("host-config.json"))
    assert hint == {"engine_hint": "molecular"}


def test_all_four_formats(demo_dir, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    formats = ("pyqt", "tkinter", "panel-ngljs", "panel-threejs")
    assert main(demo_args(demo_dir, formats=formats)) == 0
    out = tmp_path / "generated_plugins"
    assert sorted(p.name for p in out.iterdir()) == sorted(
        list(formats) + ["pymol.tar.gz", "vmd.tar.gz",
                         "web.tar.gz", "web-threejs.tar.gz"]
    )


def test_gui_output_override(demo_dir, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(
        demo_args(demo_dir, formats=("tkinter",),
                  extra=("--gui-output", "step3_generated_code"))
    ) == 0
    assert (tmp_path / "step3_generated_code" / "vmd.tar.gz").is_file()


def test_idempotent_rerun_byte_identical(demo_dir, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    main(demo_args(demo_dir))
    first = tree_digest(tmp_path)
    main(demo_args(demo_dir))
    assert tree_digest(tmp_path) == first


def test_single_source_propagation(demo_dir, tmp_path, monkeypatch):
    """Adding one flag line updates every backend tree consistently."""
    work = tmp_path / "inputs"
    shutil.copytree(demo_dir, work)
    monkeypatch.chdir(tmp_path)
    formats = ("pyqt", "tkinter", "panel-ngljs", "panel-threejs")

    main(demo_args(work, formats=formats))
    before = {
        fmt: tree_digest(tmp_path / "generated_plugins" / fmt) for fmt in formats
    }

    flags_file = work / "selected_flags.txt"
    flags_file.write_text(
        flags_file.read_text(encoding="utf-8") + "--fresh|string||Fresh\n",
        encoding="utf-8",
    )
    main(demo_args(work, formats=formats))

    for fmt in formats:
        after = tree_digest(tmp_path / "generated_plugins" / fmt)
        view = "view.py" if fmt in ("pyqt", "tkinter") else "assets/view.js"
        changed = {p for p in after if after[p] != before[fmt].get(p)}
        # exactly the spec-bearing files change; runtime and glue do not
        assert view in changed
        assert "plugin_spec.json" in changed and "MANIFEST.txt" in changed
        assert "mvp_runtime.py" not in changed
        assert "assets/runtime.js" not in changed
        view_text = (tmp_path / "generated_plugins" / fmt / view).read_text()
        assert '"flag__fresh"' in view_text


def test_usage_error_exit_2(demo_dir, capsys):
    with pytest.raises(SystemExit) as exc_info:
        main(["--ui", str(demo_dir / "layout.ui")])
    assert exc_info.value.code == 2


def test_unknown_format_exit_2(demo_dir):
    with pytest.raises(SystemExit) as exc_info:
        main(demo_args(demo_dir, formats=("gtk",)))
    assert exc_info.value.code == 2


def test_format_required_without_spec_only(demo_dir):
    with pytest.raises(SystemExit) as exc_info:
        main(demo_args(demo_dir, formats=()))
    assert exc_info.value.code == 2


def test_pipeline_error_exit_1(demo_dir, tmp_path, monkeypatch, capsys):
    broken = tmp_path / "broken.ui"
    broken.write_text(
        (demo_dir / "layout.ui").read_text(encoding="utf-8").replace(
            "area_output", "area_elsewhere"
        ),
        encoding="utf-8",
    )
    monkeypatch.chdir(tmp_path)
    args = demo_args(demo_dir)
    args[1] = str(broken)
    assert main(args) == 1
    err = capsys.readouterr().err
    assert "layout" in err and "output" in err


def test_flag_error_carries_line_number(demo_dir, tmp_path, monkeypatch, capsys):
    bad_flags = tmp_path / "flags.txt"
    bad_flags.write_text("--ok\n--bad|wat||X\n", encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    args = demo_args(demo_dir)
    args[5] = str(bad_flags)
    assert main(args) == 1
    assert "line 2" in capsys.readouterr().err


def test_derive_app_name():
    assert derive_app_name("sbl-intervor-ABW-atomic.exe") == "sbl-intervor-ABW-atomic"
    assert derive_app_name("tool") == "tool"
    assert derive_app_name("/usr/bin/tool.exe") == "tool"


def test_console_script_help():
    proc = subprocess.run(
        ["sbl-gui-generator", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    for flag in ("--ui", "--exe", "--flags", "--update-flags", "--post-script",
                 "--format", "--gui-output", "--spec-only"):
        assert flag in proc.stdout
