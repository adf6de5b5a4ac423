"""Backend registry, generated-tree assembly, and reproducible packaging.

Adding a platform means adding an emitter module plus one registry entry
here; nothing else in the pipeline changes.  Emission and packaging are
deterministic: no timestamps, fixed key order, fixed archive metadata.
"""

from __future__ import annotations

import gzip
import hashlib
import io
import shutil
import tarfile
from dataclasses import dataclass
from pathlib import Path, PurePosixPath

from .. import SblgenError
from ..spec import GuiSpec, SpecInvalid, to_json, validate
from .desktop import emit_pyqt, emit_tkinter
from .web import emit_panel_ngljs, emit_panel_threejs


class CodegenError(SblgenError):
    pass


class UnknownBackend(CodegenError):
    pass


class ArchiveCollision(CodegenError):
    pass


class IoFailure(CodegenError):
    pass


BACKENDS = {
    "pyqt": emit_pyqt,
    "tkinter": emit_tkinter,
    "panel-ngljs": emit_panel_ngljs,
    "panel-threejs": emit_panel_threejs,
}

# archive name per backend; both web targets nominally map to web.tar.gz
ARCHIVE_NAMES = {
    "tkinter": "vmd.tar.gz",
    "pyqt": "pymol.tar.gz",
    "panel-ngljs": "web.tar.gz",
    "panel-threejs": "web.tar.gz",
}

MANIFEST_NAME = "MANIFEST.txt"


@dataclass
class GeneratedTree:
    backend: str
    files: dict[str, bytes]

    def manifest_paths(self) -> list[str]:
        text = self.files[MANIFEST_NAME].decode("utf-8")
        return [line.split("  ", 1)[1] for line in text.splitlines() if line]


def generate(spec: GuiSpec, backend: str) -> GeneratedTree:
    """Emit the full plugin source tree for one backend (spec copy included)."""
    if backend not in BACKENDS:
        raise UnknownBackend(
            f"unknown backend {backend!r}; registered: {sorted(BACKENDS)}"
        )
    report = validate(spec)
    if not report.ok:
        raise SpecInvalid(report)

    raw = dict(BACKENDS[backend](spec))
    raw["plugin_spec.json"] = to_json(spec)

    files: dict[str, bytes] = {}
    for rel, content in raw.items():
        path = PurePosixPath(rel)
        if path.is_absolute() or ".." in path.parts or str(path) != rel:
            raise CodegenError(f"emitter produced a non-normalized path: {rel!r}")
        files[rel] = content.encode("utf-8") if isinstance(content, str) else content

    manifest_lines = [
        f"{hashlib.sha256(files[rel]).hexdigest()}  {rel}"
        for rel in sorted(files)
    ]
    files[MANIFEST_NAME] = ("\n".join(manifest_lines) + "\n").encode("utf-8")
    return GeneratedTree(backend=backend, files=files)


def resolve_archive_names(backends: list[str]) -> dict[str, str]:
    """Invocation-scoped archive names; the second web target gets a suffix."""
    seen: set[str] = set()
    for b in backends:
        if b in seen:
            raise ArchiveCollision(f"backend {b!r} requested twice")
        if b not in ARCHIVE_NAMES:
            raise UnknownBackend(b)
        seen.add(b)
    names = {}
    for b in backends:
        if b == "panel-threejs" and "panel-ngljs" in seen:
            names[b] = "web-threejs.tar.gz"
        else:
            names[b] = ARCHIVE_NAMES[b]
    return names


def package(tree: GeneratedTree, out_dir, archive_name: str | None = None) -> Path:
    """Write the tree under out_dir/<backend>/ and a byte-reproducible archive.

    Archive entries are in sorted path order with zero mtime, fixed
    ownership and permissions, and a gzip header without timestamp, so
    packaging the same tree twice yields identical bytes.
    """
    if not tree.files:
        raise CodegenError("refusing to package an empty tree")
    out_dir = Path(out_dir)
    tree_dir = out_dir / tree.backend
    name = archive_name or ARCHIVE_NAMES[tree.backend]
    try:
        if tree_dir.exists():
            shutil.rmtree(tree_dir)
        for rel in sorted(tree.files):
            target = tree_dir / rel
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(tree.files[rel])

        archive_path = out_dir / name
        with open(archive_path, "wb") as fh:
            gz = gzip.GzipFile(fileobj=fh, mode="wb", filename="", mtime=0)
            with gz, tarfile.open(
                fileobj=gz, mode="w", format=tarfile.USTAR_FORMAT
            ) as tar:
                for rel in sorted(tree.files):
                    data = tree.files[rel]
                    info = tarfile.TarInfo(rel)
                    info.size = len(data)
                    info.mtime = 0
                    info.mode = 0o644
                    info.uid = info.gid = 0
                    info.uname = info.gname = ""
                    tar.addfile(info, io.BytesIO(data))
    except OSError as exc:
        raise IoFailure(f"packaging {tree.backend} into {out_dir}: {exc}") from exc
    return archive_path
