"""The platform-agnostic JSON GUI specification: the single source of truth.

Widgets, areas, flag bindings, and output slots are recorded in one
validated document with schema id ``sblspec/1``.  Serialization is
canonical (fixed key order, two-space indent, trailing newline) so equal
specs always produce byte-identical text.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Optional

from . import SCHEMA_ID, SblgenError, __version__
from .flags import KINDS as FLAG_KINDS
from .flags import REFRESH_TARGETS, FlagSpec, UpdateFlagSpec
from .layout import Geometry, InvalidGeometry

AREAS = ("input", "output", "update", "viewer")
MEDIA = ("text", "image", "table", "html", "pdf")

OUTPUT_KIND_MEDIA = {
    "text_output": "text",
    "image_output": "image",
    "table_output": "table",
    "html_output": "html",
    "pdf_output": "pdf",
}

WIDGET_KINDS = (
    "checkbox",
    "line_entry",
    "file_picker",
    "int_spin",
    "float_spin",
    "combo",
    "run_button",
    "label",
    "text_output",
    "image_output",
    "table_output",
    "html_output",
    "pdf_output",
    "viewer_frame",
    "status_bar",
)

# fixed flag-kind -> widget-kind mapping
FLAG_KIND_WIDGET = {
    "bool": "checkbox",
    "int": "int_spin",
    "float": "float_spin",
    "string": "line_entry",
    "infile": "file_picker",
    "enum": "combo",
}


class SpecError(SblgenError):
    pass


class JsonSyntax(SpecError):
    pass


class SchemaMismatch(SpecError):
    pass


class SpecFormatError(SpecError):
    """Structurally unusable document: missing or wrongly typed fields."""


class SpecInvalid(SpecError):
    def __init__(self, report: "ValidationReport"):
        lines = [f"{v.code} at {v.path}: {v.message}" for v in report.violations]
        super().__init__("specification invalid:\n  " + "\n  ".join(lines))
        self.report = report


@dataclass(frozen=True)
class MetaBlock:
    app_name: str
    exe: str
    post_script: str
    schema: str = SCHEMA_ID
    generator_version: str = __version__


@dataclass(frozen=True)
class OutputSlot:
    slot_name: str
    media: str


@dataclass(frozen=True)
class WidgetSpec:
    id: str
    kind: str
    area: str
    geometry: Geometry
    label: str = ""
    slot: Optional[OutputSlot] = None


@dataclass(frozen=True)
class FlagBinding:
    flag: FlagSpec
    widget_id: str


@dataclass(frozen=True)
class UpdateBinding:
    flag: UpdateFlagSpec
    widget_id: str


@dataclass(frozen=True)
class GuiSpec:
    meta: MetaBlock
    areas: dict[str, Geometry]
    widgets: tuple[WidgetSpec, ...]
    flags: tuple[FlagBinding, ...] = ()
    update_flags: tuple[UpdateBinding, ...] = ()

    def widget_by_id(self, widget_id: str) -> Optional[WidgetSpec]:
        for w in self.widgets:
            if w.id == widget_id:
                return w
        return None

    def slots(self) -> dict[str, str]:
        """slot_name -> media, in widget order."""
        out: dict[str, str] = {}
        for w in self.widgets:
            if w.slot is not None and w.slot.slot_name not in out:
                out[w.slot.slot_name] = w.slot.media
        return out

    def update_flag_by_token(self, token: str) -> Optional[UpdateFlagSpec]:
        for b in self.update_flags:
            if b.flag.token == token:
                return b.flag
        return None


@dataclass(frozen=True)
class Violation:
    code: str
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


def validate(spec: GuiSpec) -> ValidationReport:
    """Check every specification invariant; violations are data, not errors."""
    v: list[Violation] = []

    def bad(code: str, path: str, message: str) -> None:
        v.append(Violation(code, path, message))

    meta = spec.meta
    if meta.schema != SCHEMA_ID:
        bad("BAD_SCHEMA", "meta.schema", f"unsupported schema {meta.schema!r}")
    if not meta.app_name:
        bad("EMPTY_APP_NAME", "meta.app_name", "app_name must be non-empty")
    if not meta.exe:
        bad("EMPTY_EXE", "meta.exe", "exe must be non-empty")
    if not meta.post_script:
        bad("EMPTY_POST_SCRIPT", "meta.post_script", "post_script must be non-empty")

    for name in spec.areas:
        if name not in AREAS:
            bad("BAD_AREA", f"areas.{name}", f"unknown area {name!r}")

    seen_ids: set[str] = set()
    seen_slots: set[str] = set()
    run_buttons: list[WidgetSpec] = []
    for i, w in enumerate(spec.widgets):
        path = f"widgets[{i}]"
        if w.id in seen_ids:
            bad("DUPLICATE_WIDGET_ID", f"{path}.id", f"duplicate widget id {w.id!r}")
        seen_ids.add(w.id)
        if w.kind not in WIDGET_KINDS:
            bad("BAD_WIDGET_KIND", f"{path}.kind", f"unknown kind {w.kind!r}")
        if w.area not in AREAS:
            bad("BAD_AREA", f"{path}.area", f"unknown area {w.area!r}")
        elif w.area not in spec.areas:
            bad("UNDECLARED_AREA", f"{path}.area",
                f"widget {w.id!r} sits in undeclared area {w.area!r}")
        if w.kind in OUTPUT_KIND_MEDIA and w.area != "output":
            bad("OUTPUT_KIND_AREA", f"{path}.area",
                f"output widget {w.id!r} must live in the output area")
        if w.kind == "viewer_frame" and w.area != "viewer":
            bad("VIEWER_FRAME_AREA", f"{path}.area",
                f"viewer_frame {w.id!r} must live in the viewer area")
        if w.kind == "run_button":
            run_buttons.append(w)
            if w.area != "input":
                bad("RUN_BUTTON_AREA", f"{path}.area",
                    "the run button must live in the input area")
        if w.kind in OUTPUT_KIND_MEDIA:
            if w.slot is None:
                bad("SLOT_REQUIRED", f"{path}.slot",
                    f"output widget {w.id!r} needs an output slot")
            else:
                if w.slot.media not in MEDIA:
                    bad("BAD_MEDIA", f"{path}.slot.media",
                        f"unknown media {w.slot.media!r}")
                elif w.slot.media != OUTPUT_KIND_MEDIA[w.kind]:
                    bad("SLOT_MEDIA_MISMATCH", f"{path}.slot.media",
                        f"slot media {w.slot.media!r} inconsistent with {w.kind}")
                if w.slot.slot_name in seen_slots:
                    bad("DUPLICATE_SLOT_NAME", f"{path}.slot.slot_name",
                        f"duplicate slot {w.slot.slot_name!r}")
                seen_slots.add(w.slot.slot_name)
        elif w.slot is not None:
            bad("SLOT_FORBIDDEN", f"{path}.slot",
                f"widget {w.id!r} of kind {w.kind} cannot carry a slot")

    if len(run_buttons) != 1:
        bad("RUN_BUTTON_COUNT", "widgets",
            f"expected exactly one run_button, found {len(run_buttons)}")

    widget_index = {w.id: w for w in spec.widgets}
    seen_tokens: set[str] = set()

    def check_binding(binding, i: int, listname: str, want_area: str) -> None:
        path = f"{listname}[{i}]"
        flag = binding.flag
        if not flag.token.startswith("-"):
            bad("BAD_TOKEN", f"{path}.token",
                f"token must begin with - or --, got {flag.token!r}")
        if flag.token in seen_tokens:
            bad("DUPLICATE_TOKEN", f"{path}.token",
                f"duplicate flag token {flag.token!r}")
        seen_tokens.add(flag.token)
        if flag.kind not in FLAG_KINDS:
            bad("BAD_FLAG_KIND", f"{path}.kind", f"unknown flag kind {flag.kind!r}")
        if flag.kind == "bool" and flag.default not in ("", "true", "false"):
            bad("BAD_BOOL_DEFAULT", f"{path}.default",
                f"bool default must be empty/true/false, got {flag.default!r}")
        if flag.kind == "enum":
            if len(flag.enum_choices) < 2:
                bad("BAD_ENUM_CHOICES", f"{path}.enum_choices",
                    "enum flags need at least 2 choices")
            elif flag.default and flag.default not in flag.enum_choices:
                bad("BAD_ENUM_DEFAULT", f"{path}.default",
                    f"default {flag.default!r} not among enum choices")
        elif flag.enum_choices:
            bad("ENUM_CHOICES_FORBIDDEN", f"{path}.enum_choices",
                f"kind {flag.kind} cannot carry enum choices")
        target = widget_index.get(binding.widget_id)
        if target is None:
            bad("DANGLING_WIDGET_REF", f"{path}.widget_id",
                f"widget id {binding.widget_id!r} not found")
        else:
            if target.area != want_area:
                bad("BINDING_AREA_MISMATCH", f"{path}.widget_id",
                    f"bound widget {target.id!r} sits in {target.area!r}, "
                    f"expected {want_area!r}")
            if (flag.kind in FLAG_KIND_WIDGET
                    and target.kind != FLAG_KIND_WIDGET[flag.kind]):
                bad("BINDING_KIND_MISMATCH", f"{path}.widget_id",
                    f"flag kind {flag.kind} maps to "
                    f"{FLAG_KIND_WIDGET[flag.kind]}, widget {target.id!r} "
                    f"is a {target.kind}")

    for i, b in enumerate(spec.flags):
        check_binding(b, i, "flags", "input")
    for i, b in enumerate(spec.update_flags):
        check_binding(b, i, "update_flags", "update")
        refresh = b.flag.refresh
        path = f"update_flags[{i}].refresh"
        if not refresh:
            bad("EMPTY_REFRESH", path, "refresh set must not be empty")
        else:
            for t in sorted(refresh):
                if t not in REFRESH_TARGETS:
                    bad("BAD_REFRESH", path, f"unknown refresh target {t!r}")

    return ValidationReport(tuple(v))


# -- canonical JSON -----------------------------------------------------------


def _geometry_dict(g: Geometry) -> dict[str, int]:
    return {"x": g.x, "y": g.y, "w": g.w, "h": g.h}


def _flag_dict(flag: FlagSpec) -> dict[str, Any]:
    out: dict[str, Any] = {"token": flag.token, "kind": flag.kind}
    if flag.kind == "enum":
        out["enum_choices"] = list(flag.enum_choices)
    out["default"] = flag.default
    out["label"] = flag.label
    return out


def to_canonical_dict(spec: GuiSpec) -> dict[str, Any]:
    """The canonical JSON object tree: fixed key order, lists in spec order."""
    areas: dict[str, Any] = {}
    for name in AREAS:
        if name in spec.areas:
            areas[name] = _geometry_dict(spec.areas[name])

    widgets = []
    for w in spec.widgets:
        entry: dict[str, Any] = {
            "id": w.id,
            "kind": w.kind,
            "area": w.area,
            "geometry": _geometry_dict(w.geometry),
            "label": w.label,
        }
        if w.slot is not None:
            entry["slot"] = {"slot_name": w.slot.slot_name, "media": w.slot.media}
        widgets.append(entry)

    flags = []
    for b in spec.flags:
        entry = _flag_dict(b.flag)
        entry["widget_id"] = b.widget_id
        flags.append(entry)

    update_flags = []
    for b in spec.update_flags:
        entry = _flag_dict(b.flag)
        entry["refresh"] = list(b.flag.refresh_ordered())
        entry["widget_id"] = b.widget_id
        update_flags.append(entry)

    return {
        "meta": {
            "schema": spec.meta.schema,
            "app_name": spec.meta.app_name,
            "exe": spec.meta.exe,
            "post_script": spec.meta.post_script,
            "generator_version": spec.meta.generator_version,
        },
        "areas": areas,
        "widgets": widgets,
        "flags": flags,
        "update_flags": update_flags,
    }


def to_json(spec: GuiSpec) -> str:
    report = validate(spec)
    if not report.ok:
        raise SpecInvalid(report)
    return json.dumps(to_canonical_dict(spec), indent=2, ensure_ascii=False) + "\n"


def digest(spec: GuiSpec) -> str:
    """Hex digest of the canonical serialization (used in generated headers)."""
    return hashlib.sha256(to_json(spec).encode("utf-8")).hexdigest()


def from_json(text: str) -> GuiSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JsonSyntax(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpecFormatError("top level must be a JSON object")

    meta_doc = _expect(doc, "meta", dict, "meta")
    schema = meta_doc.get("schema")
    if schema != SCHEMA_ID:
        raise SchemaMismatch(f"unsupported schema {schema!r}, expected {SCHEMA_ID!r}")

    extra: list[Violation] = []

    def load_geometry(obj: Any, path: str) -> Geometry:
        if not isinstance(obj, dict):
            raise SpecFormatError(f"{path}: geometry must be an object")
        try:
            return Geometry(
                _expect(obj, "x", int, f"{path}.x"),
                _expect(obj, "y", int, f"{path}.y"),
                _expect(obj, "w", int, f"{path}.w"),
                _expect(obj, "h", int, f"{path}.h"),
            )
        except InvalidGeometry as exc:
            extra.append(Violation("BAD_GEOMETRY", path, str(exc)))
            return Geometry(0, 0, 1, 1)

    meta = MetaBlock(
        app_name=_expect(meta_doc, "app_name", str, "meta.app_name"),
        exe=_expect(meta_doc, "exe", str, "meta.exe"),
        post_script=_expect(meta_doc, "post_script", str, "meta.post_script"),
        schema=schema,
        generator_version=_expect(
            meta_doc, "generator_version", str, "meta.generator_version"
        ),
    )

    areas_doc = _expect(doc, "areas", dict, "areas")
    areas = {
        name: load_geometry(g, f"areas.{name}") for name, g in areas_doc.items()
    }

    widgets = []
    for i, w in enumerate(_expect(doc, "widgets", list, "widgets")):
        path = f"widgets[{i}]"
        if not isinstance(w, dict):
            raise SpecFormatError(f"{path}: widget must be an object")
        slot = None
        if "slot" in w:
            slot_doc = _expect(w, "slot", dict, f"{path}.slot")
            slot = OutputSlot(
                slot_name=_expect(slot_doc, "slot_name", str, f"{path}.slot.slot_name"),
                media=_expect(slot_doc, "media", str, f"{path}.slot.media"),
            )
        widgets.append(
            WidgetSpec(
                id=_expect(w, "id", str, f"{path}.id"),
                kind=_expect(w, "kind", str, f"{path}.kind"),
                area=_expect(w, "area", str, f"{path}.area"),
                geometry=load_geometry(w.get("geometry"), f"{path}.geometry"),
                label=_expect(w, "label", str, f"{path}.label"),
                slot=slot,
            )
        )

    def load_flag(entry: Any, path: str, update: bool):
        if not isinstance(entry, dict):
            raise SpecFormatError(f"{path}: flag binding must be an object")
        choices = entry.get("enum_choices", [])
        if not isinstance(choices, list) or not all(
            isinstance(c, str) for c in choices
        ):
            raise SpecFormatError(f"{path}.enum_choices: must be a list of strings")
        common = dict(
            token=_expect(entry, "token", str, f"{path}.token"),
            kind=_expect(entry, "kind", str, f"{path}.kind"),
            default=_expect(entry, "default", str, f"{path}.default"),
            label=_expect(entry, "label", str, f"{path}.label"),
            enum_choices=tuple(choices),
        )
        widget_id = _expect(entry, "widget_id", str, f"{path}.widget_id")
        if not update:
            return FlagBinding(FlagSpec(**common), widget_id)
        refresh = entry.get("refresh", [])
        if not isinstance(refresh, list) or not all(
            isinstance(t, str) for t in refresh
        ):
            raise SpecFormatError(f"{path}.refresh: must be a list of strings")
        return UpdateBinding(
            UpdateFlagSpec(**common, refresh=frozenset(refresh)), widget_id
        )

    flags = tuple(
        load_flag(e, f"flags[{i}]", update=False)
        for i, e in enumerate(_expect(doc, "flags", list, "flags"))
    )
    update_flags = tuple(
        load_flag(e, f"update_flags[{i}]", update=True)
        for i, e in enumerate(_expect(doc, "update_flags", list, "update_flags"))
    )

    spec = GuiSpec(
        meta=meta,
        areas=areas,
        widgets=tuple(widgets),
        flags=flags,
        update_flags=update_flags,
    )
    report = validate(spec)
    all_violations = tuple(extra) + report.violations
    if all_violations:
        raise SpecInvalid(ValidationReport(all_violations))
    return spec


def _expect(obj: dict, key: str, typ, path: str):
    if key not in obj:
        raise SpecFormatError(f"{path}: missing")
    value = obj[key]
    if typ is int and isinstance(value, bool):
        raise SpecFormatError(f"{path}: expected {typ.__name__}")
    if not isinstance(value, typ):
        raise SpecFormatError(f"{path}: expected {typ.__name__}")
    return value
