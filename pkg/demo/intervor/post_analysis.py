#!/usr/bin/env python3
"""Platform-independent post-analysis for the interface-analysis demo.

Reads the raw executable output from --run-dir, converts it into the
figures/tables/texts shown in the output area plus viewer payloads, and
indexes everything in manifest.json under --out-dir.
"""
import argparse
import base64
import json
from pathlib import Path

# 1x1 PNG, enough for an image slot without an imaging dependency
_PNG = base64.b64decode(
    "iVBORw0KGgoAAAANSUhEUgAAAAEAAAABCAYAAAAfFcSJAAAADUlEQVR42mP8"
    "z8BQDwAEhQGAhKmMIQAAAABJRU5ErkJggg=="
)


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--run-dir", required=True)
    ap.add_argument("--out-dir", required=True)
    ap.add_argument("--smoothing", default="0.5")
    ap.add_argument("--palette", default="viridis")
    ap.add_argument("--bins", type=int, default=20)
    args = ap.parse_args()

    run_dir = Path(args.run_dir)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    raw = run_dir / "raw_interface.txt"
    raw_text = raw.read_text(encoding="utf-8") if raw.exists() else "(no raw output)\n"

    (out_dir / "log.txt").write_text(
        "interface analysis complete\n"
        f"smoothing={args.smoothing} palette={args.palette} bins={args.bins}\n"
        + raw_text,
        encoding="utf-8",
    )
    (out_dir / "interface.png").write_bytes(_PNG)

    rows = ["bin,count"]
    for i in range(args.bins):
        rows.append(f"{i},{(i * 7) % 13}")
    (out_dir / "stats.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    (out_dir / "structure.pdb").write_text(
        "HEADER    DEMO INTERFACE\nATOM      1  CA  ALA A   1      "
        "0.000   0.000   0.000  1.00  0.00           C\nEND\n",
        encoding="utf-8",
    )
    (out_dir / "scene.json").write_text(
        json.dumps({"palette": args.palette, "smoothing": args.smoothing}) + "\n",
        encoding="utf-8",
    )
    (out_dir / "interface.vmd").write_text(
        "mol new structure.pdb\nmol modstyle 0 0 NewCartoon\n", encoding="utf-8"
    )
    (out_dir / "interface.py").write_text(
        "cmd.load('structure.pdb')\ncmd.show('cartoon')\n", encoding="utf-8"
    )

    manifest = {
        "slots": {
            "log": {"media": "text", "path": "log.txt"},
            "interface": {"media": "image", "path": "interface.png"},
            "stats": {"media": "table", "path": "stats.csv"},
        },
        "viewer": [
            {"engine_hint": "molecular", "path": "structure.pdb"},
            {"engine_hint": "molecular", "path": "scene.json"},
            {"engine_hint": "molecular", "path": "interface.vmd"},
            {"engine_hint": "molecular", "path": "interface.py"},
        ],
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
