"""Shared helpers for the per-backend emitters."""

from __future__ import annotations

import json
from pathlib import Path
from string import Template

from .. import __version__
from ..spec import AREAS, GuiSpec, WidgetSpec, digest

TEMPLATE_DIR = Path(__file__).resolve().parent / "templates"


def load_template(name: str) -> str:
    return (TEMPLATE_DIR / name).read_text(encoding="utf-8")


def render(name: str, **subs: str) -> str:
    return Template(load_template(name)).substitute(**subs)


def base_substitutions(spec: GuiSpec) -> dict[str, str]:
    return {
        "app_name": spec.meta.app_name,
        "app_name_json": json.dumps(spec.meta.app_name),
        "digest": digest(spec)[:16],
        "version": __version__,
    }


def widget_extra(spec: GuiSpec, widget: WidgetSpec) -> dict:
    """Binding metadata a view needs beyond the widget record itself."""
    extra: dict = {}
    for binding in list(spec.flags) + list(spec.update_flags):
        if binding.widget_id == widget.id:
            extra["token"] = binding.flag.token
            if binding.flag.kind == "enum":
                extra["choices"] = list(binding.flag.enum_choices)
            if binding.flag.default:
                extra["default"] = binding.flag.default
            break
    if widget.slot is not None:
        extra["slot"] = widget.slot.slot_name
        extra["media"] = widget.slot.media
    return extra


def python_widget_rows(spec: GuiSpec) -> str:
    """One tuple literal per widget, spec order, double-quoted strings."""
    rows = []
    for w in spec.widgets:
        g = w.geometry
        rows.append(
            "    ({id}, {kind}, {area}, ({x}, {y}, {w}, {h}), {label}, {extra}),".format(
                id=json.dumps(w.id),
                kind=json.dumps(w.kind),
                area=json.dumps(w.area),
                x=g.x, y=g.y, w=g.w, h=g.h,
                label=json.dumps(w.label),
                extra=json.dumps(widget_extra(spec, w)),
            )
        )
    return "\n".join(rows)


def python_area_rows(spec: GuiSpec) -> str:
    rows = []
    for name in AREAS:
        if name in spec.areas:
            g = spec.areas[name]
            rows.append(
                f"    {json.dumps(name)}: ({g.x}, {g.y}, {g.w}, {g.h}),"
            )
    return "\n".join(rows)


def js_widget_rows(spec: GuiSpec) -> str:
    rows = []
    for w in spec.widgets:
        g = w.geometry
        entry = {
            "id": w.id,
            "kind": w.kind,
            "area": w.area,
            "geometry": {"x": g.x, "y": g.y, "w": g.w, "h": g.h},
            "label": w.label,
            "extra": widget_extra(spec, w),
        }
        rows.append("  " + json.dumps(entry) + ",")
    return "\n".join(rows)


def js_area_rows(spec: GuiSpec) -> str:
    rows = []
    for name in AREAS:
        if name in spec.areas:
            g = spec.areas[name]
            geometry = {"x": g.x, "y": g.y, "w": g.w, "h": g.h}
            rows.append(f"  {json.dumps(name)}: {json.dumps(geometry)},")
    return "\n".join(rows)
