from __future__ import annotations

import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
REPO_ROOT = HERE.parent.parent
sys.path.insert(0, str(HERE.parent / "src"))

DEMO_DIR = REPO_ROOT / "demo" / "intervor"
CORPUS_DIR = REPO_ROOT / "tests" / "data" / "corpus"
