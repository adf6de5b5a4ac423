"""Fake post-analysis script.

Writes one artifact per slot named in SBLGEN_FAKE_SLOTS (JSON mapping
slot name -> media, default {"log": "text"}) plus manifest.json, and
bumps a per-run-dir invocation counter.  Misbehavior knobs for negative
tests:

  SBLGEN_FAKE_EXIT            nonzero exit before writing anything
  SBLGEN_FAKE_OMIT_MANIFEST   write artifacts but no manifest.json
  SBLGEN_FAKE_EXTRA_SLOT      add an extra manifest slot of this name
  SBLGEN_FAKE_ESCAPE          use an escaping ../ path for the first slot
  SBLGEN_FAKE_VIEWER          JSON list of engine hints to list as viewer files
"""
import base64
import json
import os
import sys
from pathlib import Path

_PNG = base64.b64decode(
    "iVBORw0KGgoAAAANSUhEUgAAAAEAAAABCAYAAAAfFcSJAAAADUlEQVR42mP8"
    "z8BQDwAEhQGAhKmMIQAAAABJRU5ErkJggg=="
)
_EXT = {"text": "txt", "image": "png", "table": "csv", "html": "html", "pdf": "pdf"}


def artifact_bytes(media: str, body: str) -> bytes:
    if media == "image":
        return _PNG
    if media == "table":
        return f"key,value\nbody,{body}\n".encode()
    if media == "html":
        return f"<html><body>{body}</body></html>\n".encode()
    if media == "pdf":
        return b"%PDF-1.4\n% " + body.encode() + b"\n%%EOF\n"
    return (body + "\n").encode()


def main() -> int:
    if os.environ.get("SBLGEN_FAKE_EXIT"):
        print("post-analysis synthetic failure", file=sys.stderr)
        return int(os.environ["SBLGEN_FAKE_EXIT"])

    args = sys.argv[1:]
    run_dir = Path(args[args.index("--run-dir") + 1])
    out_dir = Path(args[args.index("--out-dir") + 1])
    out_dir.mkdir(parents=True, exist_ok=True)
    update_args = [
        a for i, a in enumerate(args)
        if a not in ("--run-dir", "--out-dir")
        and (i == 0 or args[i - 1] not in ("--run-dir", "--out-dir"))
    ]

    counter = run_dir / "post_runs.txt"
    runs = int(counter.read_text()) if counter.exists() else 0
    counter.write_text(str(runs + 1))
    (run_dir / "post_args.json").write_text(json.dumps(update_args))

    slots = json.loads(os.environ.get("SBLGEN_FAKE_SLOTS", '{"log": "text"}'))
    body = "update-args: " + " ".join(update_args)
    manifest = {"slots": {}, "viewer": []}
    for i, (name, media) in enumerate(slots.items()):
        rel = f"{name}.{_EXT[media]}"
        (out_dir / rel).write_bytes(artifact_bytes(media, body))
        if i == 0 and os.environ.get("SBLGEN_FAKE_ESCAPE"):
            rel = f"../{rel}"
        manifest["slots"][name] = {"media": media, "path": rel}

    if os.environ.get("SBLGEN_FAKE_EXTRA_SLOT"):
        name = os.environ["SBLGEN_FAKE_EXTRA_SLOT"]
        rel = f"{name}.txt"
        (out_dir / rel).write_bytes(b"extra\n")
        manifest["slots"][name] = {"media": "text", "path": rel}

    for i, hint in enumerate(json.loads(os.environ.get("SBLGEN_FAKE_VIEWER", "[]"))):
        rel = f"scene_{i}.dat"
        (out_dir / rel).write_bytes(b"scene\n")
        manifest["viewer"].append({"engine_hint": hint, "path": rel})

    if not os.environ.get("SBLGEN_FAKE_OMIT_MANIFEST"):
        (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
