"""Emitters for the web family: panel-ngljs (molecular) and panel-threejs (mesh).

The two targets share the web runtime and differ only in the viewer page
and the engine hint recorded in host-config.json for the plugin host.
"""

from __future__ import annotations

import json

from ..spec import GuiSpec
from .common import (
    base_substitutions,
    js_area_rows,
    js_widget_rows,
    load_template,
    render,
)


def _emit_web(spec: GuiSpec, engine_hint: str) -> dict[str, str]:
    subs = base_substitutions(spec)
    subs["widget_rows"] = js_widget_rows(spec)
    subs["area_rows"] = js_area_rows(spec)
    viewer_page = (
        "viewer_molecular.html" if engine_hint == "molecular" else "viewer_mesh.html"
    )
    return {
        "index.html": render("index.html.tmpl", **subs),
        "assets/view.js": render("view.js.tmpl", **subs),
        "assets/runtime.js": load_template("runtime.js"),
        "assets/style.css": load_template("style.css"),
        "viewer/index.html": load_template(viewer_page),
        "host-config.json": json.dumps({"engine_hint": engine_hint}, indent=2) + "\n",
    }


def emit_panel_ngljs(spec: GuiSpec) -> dict[str, str]:
    return _emit_web(spec, "molecular")


def emit_panel_threejs(spec: GuiSpec) -> dict[str, str]:
    return _emit_web(spec, "mesh")
