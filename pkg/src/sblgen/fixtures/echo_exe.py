"""Fake executable: records its argv and bumps a per-run-dir counter."""
import json
import sys
from pathlib import Path

cwd = Path.cwd()
(cwd / "argv.json").write_text(json.dumps(sys.argv[1:]), encoding="utf-8")
counter = cwd / "exe_runs.txt"
runs = int(counter.read_text()) if counter.exists() else 0
counter.write_text(str(runs + 1))
(cwd / "raw_output.txt").write_text("raw result\n", encoding="utf-8")
print("echo-exe done", file=sys.stderr)
