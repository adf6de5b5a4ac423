from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

REPO_ROOT = Path(__file__).resolve().parent.parent
DEMO_DIR = REPO_ROOT / "demo" / "intervor"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"
CORPUS_DIR = Path(__file__).resolve().parent / "data" / "corpus"


@pytest.fixture(scope="session")
def demo_dir() -> Path:
    return DEMO_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture(scope="session")
def demo_layout_text(demo_dir) -> str:
    return (demo_dir / "layout.ui").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def demo_spec():
    """The demo project built into a validated GuiSpec."""
    from sblgen import builder, flags, layout, spec

    tree = layout.parse_ui((DEMO_DIR / "layout.ui").read_text(encoding="utf-8"))
    areas = layout.classify_areas(tree)
    input_flags = flags.parse_flags_file(
        (DEMO_DIR / "selected_flags.txt").read_text(encoding="utf-8"), "input"
    )
    update_flags = flags.parse_flags_file(
        (DEMO_DIR / "update_area_flags.txt").read_text(encoding="utf-8"), "update"
    )
    meta = spec.MetaBlock(
        app_name="sbl-intervor-ABW-atomic",
        exe="sbl-intervor-ABW-atomic.exe",
        post_script="post_analysis.py",
    )
    return builder.build_spec(tree, areas, input_flags, update_flags, meta)
