"""Emitters for the desktop family: pyqt (PyMOL host) and tkinter (VMD host).

Both targets share one runtime file byte for byte; only the View and the
loader glue differ.  The tkinter target additionally ships the viewer-side
Tcl socket listener.
"""

from __future__ import annotations

from .. import __version__
from ..spec import GuiSpec
from .common import (
    base_substitutions,
    load_template,
    python_area_rows,
    python_widget_rows,
    render,
)


def _desktop_runtime() -> str:
    return render("mvp_runtime.py.tmpl", version=__version__)


def emit_pyqt(spec: GuiSpec) -> dict[str, str]:
    subs = base_substitutions(spec)
    subs["widget_rows"] = python_widget_rows(spec)
    subs["area_rows"] = python_area_rows(spec)
    return {
        "view.py": render("view_qt.py.tmpl", **subs),
        "mvp_runtime.py": _desktop_runtime(),
        "plugin_load.py": render("plugin_load_pymol.py.tmpl", **subs),
    }


def emit_tkinter(spec: GuiSpec) -> dict[str, str]:
    subs = base_substitutions(spec)
    subs["widget_rows"] = python_widget_rows(spec)
    subs["area_rows"] = python_area_rows(spec)
    return {
        "view.py": render("view_tk.py.tmpl", **subs),
        "mvp_runtime.py": _desktop_runtime(),
        "plugin_load.py": render("plugin_load_vmd.py.tmpl", **subs),
        "vmd_socket_server.tcl": load_template("vmd_socket_server.tcl"),
    }
