"""Merge a parsed layout, flag catalogs, and metadata into a validated GuiSpec.

Association between layout widgets and catalog entries is by naming
convention: ``flag__<token>`` binds a pre-drawn control to a flag,
``out_<media>_<slot>`` declares an output widget, and a widget named
``run`` is the launch button.  Flags without a matching pre-drawn widget
are synthesized below the drawn ones; the synthesis constants (32 px row
pitch, 140 px label column, 160x24 controls) keep generation
deterministic and diff-friendly.
"""

from __future__ import annotations

from . import SblgenError
from .flags import FlagSpec, UpdateFlagSpec
from .layout import AreaMap, Geometry, WidgetNode
from .spec import (
    FLAG_KIND_WIDGET,
    MEDIA,
    FlagBinding,
    GuiSpec,
    MetaBlock,
    OutputSlot,
    SpecInvalid,
    UpdateBinding,
    WidgetSpec,
    validate,
)

ROW_PITCH = 32
LABEL_COLUMN = 140
CONTROL_W = 160
CONTROL_H = 24
MARGIN = 8
RUN_W = 120
RUN_H = 28


class BuilderError(SblgenError):
    pass


class UpdateFlagsWithoutUpdateArea(BuilderError):
    pass


class FlagKindMismatch(BuilderError):
    pass


class UnparseableOutputName(BuilderError):
    pass


class UnboundFlagWidget(BuilderError):
    pass


class ViewerAreaNotEmpty(BuilderError):
    pass


# designer classes acceptable as a pre-drawn control for each widget kind;
# unknown classes are accepted verbatim (forward compatibility)
_KIND_CLASSES = {
    "checkbox": {"QCheckBox"},
    "int_spin": {"QSpinBox"},
    "float_spin": {"QDoubleSpinBox"},
    "line_entry": {"QLineEdit"},
    "file_picker": {"QLineEdit", "QToolButton"},
    "combo": {"QComboBox"},
}
_KNOWN_CONTROL_CLASSES = set().union(*_KIND_CLASSES.values())


def flag_widget_id(token: str) -> str:
    """``--max-iters`` -> ``flag__max_iters``: the binding convention."""
    return "flag__" + token.lstrip("-").replace("-", "_")


def build_spec(
    tree: WidgetNode,
    areas: AreaMap,
    flags: list[FlagSpec],
    update_flags: list[UpdateFlagSpec],
    meta: MetaBlock,
) -> GuiSpec:
    """Produce the formal specification; the result always validates cleanly."""
    if update_flags and areas.update is None:
        raise UpdateFlagsWithoutUpdateArea(
            "update flags given but the layout has no area_update container"
        )

    area_geoms = {name: node.geometry for name, node in areas.present().items()}

    widgets: list[WidgetSpec] = []
    bindings: list[FlagBinding] = []
    update_bindings: list[UpdateBinding] = []

    in_widgets, run_seen = _walk_flag_area(
        areas.input, "input", flags, bindings, FlagBinding, allow_run=True
    )
    widgets.extend(in_widgets)
    if not run_seen:
        area_w = areas.input.geometry.w
        widgets.append(
            WidgetSpec(
                "run", "run_button", "input",
                Geometry(max(MARGIN, area_w - RUN_W - MARGIN), MARGIN, RUN_W, RUN_H),
                "Run",
            )
        )
    widgets.extend(
        _synthesize_flags(flags, bindings, FlagBinding, "input", in_widgets)
    )

    widgets.extend(_walk_output_area(areas.output))

    if areas.update is not None:
        up_widgets, _ = _walk_flag_area(
            areas.update, "update", update_flags, update_bindings, UpdateBinding,
            allow_run=False,
        )
        widgets.extend(up_widgets)
        widgets.extend(
            _synthesize_flags(
                update_flags, update_bindings, UpdateBinding, "update", up_widgets
            )
        )

    if areas.viewer is not None:
        if areas.viewer.children:
            raise ViewerAreaNotEmpty(
                "the viewer area container must be empty; its frame is synthesized"
            )
        g = areas.viewer.geometry
        label = areas.viewer.properties.get("title", "3D view")
        widgets.append(
            WidgetSpec("viewer", "viewer_frame", "viewer",
                       Geometry(0, 0, g.w, g.h), label)
        )

    spec = GuiSpec(
        meta=meta,
        areas=area_geoms,
        widgets=tuple(widgets),
        flags=tuple(bindings),
        update_flags=tuple(update_bindings),
    )
    report = validate(spec)
    if not report.ok:
        raise SpecInvalid(report)
    return spec


def _display_label(node: WidgetNode) -> str:
    for key in ("text", "title", "toolTip"):
        value = node.properties.get(key, "")
        if value:
            return value
    return node.object_name


def _walk_flag_area(container, area, catalog, bindings, binding_cls, allow_run):
    """Pre-drawn widgets of an input-like area, bound against the catalog."""
    by_widget_name = {flag_widget_id(f.token): f for f in catalog}
    widgets: list[WidgetSpec] = []
    run_seen = False

    for leaf in _area_leaves(container):
        name = leaf.object_name
        if allow_run and name == "run":
            widgets.append(
                WidgetSpec("run", "run_button", area, leaf.geometry,
                           leaf.properties.get("text") or "Run")
            )
            run_seen = True
        elif name.startswith("flag__"):
            flag = by_widget_name.get(name)
            if flag is None:
                raise UnboundFlagWidget(
                    f"layout widget {name!r} matches no catalog token"
                )
            kind = FLAG_KIND_WIDGET[flag.kind]
            if (leaf.class_name in _KNOWN_CONTROL_CLASSES
                    and leaf.class_name not in _KIND_CLASSES[kind]):
                raise FlagKindMismatch(
                    f"widget {name!r} is a {leaf.class_name}, but flag "
                    f"{flag.token!r} of kind {flag.kind} needs {kind}"
                )
            widgets.append(WidgetSpec(name, kind, area, leaf.geometry, flag.label))
            bindings.append(binding_cls(flag, name))
        elif leaf.class_name == "QLabel":
            widgets.append(
                WidgetSpec(name, "label", area, leaf.geometry, _display_label(leaf))
            )
        elif leaf.class_name == "QStatusBar":
            widgets.append(
                WidgetSpec(name, "status_bar", area, leaf.geometry, "")
            )
        else:
            raise UnboundFlagWidget(
                f"{area}-area widget {name!r} ({leaf.class_name}) is neither "
                f"{'the run button, ' if allow_run else ''}a flag__* control, "
                "nor a label"
            )
    return widgets, run_seen


def _walk_output_area(container) -> list[WidgetSpec]:
    widgets: list[WidgetSpec] = []
    for leaf in _area_leaves(container):
        name = leaf.object_name
        if name.startswith("out_"):
            rest = name[len("out_"):]
            media, _, slot = rest.partition("_")
            if media not in MEDIA or not slot:
                raise UnparseableOutputName(
                    f"output widget {name!r} does not match out_<media>_<slot> "
                    f"with media in {MEDIA}"
                )
            widgets.append(
                WidgetSpec(
                    name, f"{media}_output", "output", leaf.geometry,
                    leaf.properties.get("text") or slot,
                    slot=OutputSlot(slot, media),
                )
            )
        elif leaf.class_name == "QLabel":
            widgets.append(
                WidgetSpec(name, "label", "output", leaf.geometry,
                           _display_label(leaf))
            )
        elif leaf.class_name == "QStatusBar":
            widgets.append(WidgetSpec(name, "status_bar", "output",
                                      leaf.geometry, ""))
        else:
            raise UnparseableOutputName(
                f"output-area widget {name!r} ({leaf.class_name}) is neither "
                "out_<media>_<slot> nor a label"
            )
    return widgets


def _area_leaves(container: WidgetNode):
    for child in container.children:
        yield from child.iter_leaves()


def _synthesize_flags(catalog, bindings, binding_cls, area, drawn_widgets):
    """Widgets for catalog entries without a pre-drawn control, stacked below."""
    bound_ids = {b.widget_id for b in bindings}
    stack_base = MARGIN
    flag_rows = [w for w in drawn_widgets if w.kind != "run_button"]
    if flag_rows:
        stack_base = max(w.geometry.y + w.geometry.h for w in flag_rows) + MARGIN

    out: list[WidgetSpec] = []
    row = 0
    for flag in catalog:
        wid = flag_widget_id(flag.token)
        if wid in bound_ids:
            continue
        kind = FLAG_KIND_WIDGET[flag.kind]
        geometry = Geometry(
            LABEL_COLUMN, stack_base + ROW_PITCH * row, CONTROL_W, CONTROL_H
        )
        out.append(WidgetSpec(wid, kind, area, geometry, flag.label))
        bindings.append(binding_cls(flag, wid))
        row += 1

    # bindings follow catalog order, not drawn-first order
    order = {flag_widget_id(f.token): i for i, f in enumerate(catalog)}
    bindings.sort(key=lambda b: order[b.widget_id])
    return out
