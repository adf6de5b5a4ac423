"""Tiny self-contained fake executables and post-analysis scripts for tests."""

from pathlib import Path

_HERE = Path(__file__).resolve().parent


def fixture_path(name: str) -> Path:
    path = _HERE / name
    if not path.is_file():
        raise FileNotFoundError(f"no such fixture: {name}")
    return path
