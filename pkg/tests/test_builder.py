from __future__ import annotations

import pytest

from sblgen import builder
from sblgen.builder import (
    FlagKindMismatch,
    UnboundFlagWidget,
    UnparseableOutputName,
    UpdateFlagsWithoutUpdateArea,
    ViewerAreaNotEmpty,
    build_spec,
    flag_widget_id,
)
from sblgen.flags import FlagSpec, UpdateFlagSpec, parse_flags_file
from sblgen.layout import AreaMap, Geometry, WidgetNode, classify_areas, parse_ui
from sblgen.spec import MetaBlock, to_json, validate

META = MetaBlock(app_name="demo", exe="tool.exe", post_script="post.py")
G = Geometry(0, 0, 100, 100)


def make_tree(input_children=(), output_children=(), update=None, viewer=None):
    areas = [
        WidgetNode("QGroupBox", "area_input", Geometry(10, 10, 440, 300),
                   children=list(input_children)),
        WidgetNode("QGroupBox", "area_output", Geometry(460, 10, 450, 300),
                   children=list(output_children)),
    ]
    if update is not None:
        areas.append(
            WidgetNode("QGroupBox", "area_update", Geometry(10, 320, 440, 150),
                       children=list(update))
        )
    if viewer is not None:
        areas.append(
            WidgetNode("QGroupBox", "area_viewer", Geometry(460, 320, 450, 310),
                       children=list(viewer))
        )
    root = WidgetNode("QWidget", "root", Geometry(0, 0, 920, 640), children=areas)
    return root, classify_areas(root)


def leaf(cls, name, x=10, y=10, w=80, h=24, **props):
    return WidgetNode(cls, name, Geometry(x, y, w, h), properties=dict(props))


def test_minimal_build_synthesizes_run_button():
    tree, areas = make_tree(
        output_children=[leaf("QPlainTextEdit", "out_text_log")]
    )
    spec = build_spec(tree, areas, [], [], META)
    assert validate(spec).ok
    kinds = [(w.id, w.kind, w.area) for w in spec.widgets]
    assert ("run", "run_button", "input") in kinds
    [out] = [w for w in spec.widgets if w.area == "output"]
    assert out.slot is not None
    assert (out.slot.slot_name, out.slot.media) == ("log", "text")
    assert spec.flags == () and spec.update_flags == ()


def test_synthesized_flags_stack_in_catalog_order():
    tree, areas = make_tree(
        output_children=[leaf("QPlainTextEdit", "out_text_log")]
    )
    flags = [
        FlagSpec("--verbose", "bool", "", "verbose"),
        FlagSpec("--radius", "float", "3.0", "Radius"),
    ]
    spec = build_spec(tree, areas, flags, [], META)
    synth = [w for w in spec.widgets if w.id.startswith("flag__")]
    assert [w.id for w in synth] == ["flag__verbose", "flag__radius"]
    assert [w.kind for w in synth] == ["checkbox", "float_spin"]
    assert [w.geometry.as_tuple() for w in synth] == [
        (140, 8, 160, 24),
        (140, 40, 160, 24),
    ]
    assert [(b.flag.token, b.widget_id) for b in spec.flags] == [
        ("--verbose", "flag__verbose"),
        ("--radius", "flag__radius"),
    ]


def test_predrawn_widgets_bound_not_duplicated():
    tree, areas = make_tree(
        input_children=[leaf("QCheckBox", "flag__verbose", y=30)],
        output_children=[leaf("QPlainTextEdit", "out_text_log")],
    )
    flags = [FlagSpec("--verbose", "bool", "", "Say more")]
    spec = build_spec(tree, areas, flags, [], META)
    [w] = [x for x in spec.widgets if x.id == "flag__verbose"]
    assert w.geometry.y == 30  # drawn geometry kept
    assert w.label == "Say more"  # catalog label wins
    assert len(spec.flags) == 1


def test_flag_kind_mismatch():
    tree, areas = make_tree(
        input_children=[leaf("QCheckBox", "flag__radius")],
        output_children=[leaf("QPlainTextEdit", "out_text_log")],
    )
    with pytest.raises(FlagKindMismatch):
        build_spec(tree, areas, [FlagSpec("--radius", "float", "3.0", "R")], [], META)


def test_unknown_class_accepted_for_flag():
    tree, areas = make_tree(
        input_children=[leaf("FancyToggle", "flag__verbose")],
        output_children=[leaf("QPlainTextEdit", "out_text_log")],
    )
    spec = build_spec(tree, areas, [FlagSpec("--verbose", "bool")], [], META)
    [w] = [x for x in spec.widgets if x.id == "flag__verbose"]
    assert w.kind == "checkbox"


def test_orphan_flag_widget_rejected():
    tree, areas = make_tree(
        input_children=[leaf("QCheckBox", "flag__ghost")],
        output_children=[leaf("QPlainTextEdit", "out_text_log")],
    )
    with pytest.raises(UnboundFlagWidget):
        build_spec(tree, areas, [], [], META)


@pytest.mark.parametrize(
    "name", ["out_video_x", "out_text_", "out_", "outx"]
)
def test_unparseable_output_names(name):
    cls = "QLabel" if name == "outx" else "QPlainTextEdit"
    if name == "outx":
        # labels are fine; make it a non-label class to trigger the error
        cls = "QLineEdit"
    tree, areas = make_tree(output_children=[leaf(cls, name)])
    with pytest.raises(UnparseableOutputName):
        build_spec(tree, areas, [], [], META)


def test_labels_pass_through_output_area():
    tree, areas = make_tree(
        output_children=[
            leaf("QLabel", "lbl_x", text="hello"),
            leaf("QPlainTextEdit", "out_text_log"),
        ]
    )
    spec = build_spec(tree, areas, [], [], META)
    [lbl] = [w for w in spec.widgets if w.id == "lbl_x"]
    assert lbl.kind == "label" and lbl.label == "hello"


def test_update_flags_without_update_area():
    tree, areas = make_tree(output_children=[leaf("QPlainTextEdit", "out_text_log")])
    uf = [UpdateFlagSpec("--s", "float", "0.5", "S", refresh=frozenset({"outputs"}))]
    with pytest.raises(UpdateFlagsWithoutUpdateArea):
        build_spec(tree, areas, [], uf, META)


def test_update_flags_bound_and_synthesized():
    tree, areas = make_tree(
        output_children=[leaf("QPlainTextEdit", "out_text_log")],
        update=[leaf("QDoubleSpinBox", "flag__smooth", y=30)],
    )
    uf = [
        UpdateFlagSpec("--smooth", "float", "0.5", "S",
                       refresh=frozenset({"outputs"})),
        UpdateFlagSpec("--bins", "int", "10", "B", refresh=frozenset({"viewer"})),
    ]
    spec = build_spec(tree, areas, [], uf, META)
    upd = [w for w in spec.widgets if w.area == "update"]
    assert [w.id for w in upd] == ["flag__smooth", "flag__bins"]
    assert upd[1].geometry.as_tuple() == (140, 62, 160, 24)  # stacked below drawn
    assert [b.flag.token for b in spec.update_flags] == ["--smooth", "--bins"]


def test_viewer_area_synthesis_and_rejection():
    tree, areas = make_tree(
        output_children=[leaf("QPlainTextEdit", "out_text_log")], viewer=[]
    )
    spec = build_spec(tree, areas, [], [], META)
    [v] = [w for w in spec.widgets if w.area == "viewer"]
    assert v.kind == "viewer_frame" and v.id == "viewer"
    assert v.geometry.as_tuple() == (0, 0, 450, 310)

    tree2, areas2 = make_tree(
        output_children=[leaf("QPlainTextEdit", "out_text_log")],
        viewer=[leaf("QLabel", "stray")],
    )
    with pytest.raises(ViewerAreaNotEmpty):
        build_spec(tree2, areas2, [], [], META)


def test_build_is_deterministic(demo_spec):
    assert to_json(demo_spec) == to_json(demo_spec)


def test_demo_build_shape(demo_spec):
    spec = demo_spec
    assert validate(spec).ok
    assert set(spec.areas) == {"input", "output", "update", "viewer"}
    assert [b.flag.token for b in spec.flags] == [
        "--pdb-file", "--verbose", "--radius", "--mode", "--max-iters",
    ]
    assert spec.slots() == {"log": "text", "interface": "image", "stats": "table"}
    # pre-drawn controls keep their rects, synthesized ones stack below
    by_id = {w.id: w for w in spec.widgets}
    assert by_id["flag__pdb_file"].geometry.y == 30
    assert by_id["flag__radius"].geometry.as_tuple() == (140, 94, 160, 24)
    assert by_id["flag__mode"].geometry.as_tuple() == (140, 126, 160, 24)
    assert by_id["flag__max_iters"].geometry.as_tuple() == (140, 158, 160, 24)
    assert by_id["run"].kind == "run_button"


def test_monotone_merge_appends_one_widget(demo_dir):
    from sblgen.layout import classify_areas as ca

    layout_text = (demo_dir / "layout.ui").read_text(encoding="utf-8")
    flags_text = (demo_dir / "selected_flags.txt").read_text(encoding="utf-8")
    update_text = (demo_dir / "update_area_flags.txt").read_text(encoding="utf-8")
    tree = parse_ui(layout_text)
    flags = parse_flags_file(flags_text, "input")
    update_flags = parse_flags_file(update_text, "update")
    spec1 = build_spec(tree, ca(tree), flags, update_flags, META)

    flags2 = flags + [FlagSpec("--extra", "string", "", "Extra")]
    tree2 = parse_ui(layout_text)
    spec2 = build_spec(tree2, ca(tree2), flags2, update_flags, META)

    ids1 = [w.id for w in spec1.widgets]
    ids2 = [w.id for w in spec2.widgets]
    assert "flag__extra" in ids2
    ids2.remove("flag__extra")
    assert ids2 == ids1
    # existing widgets untouched, one binding appended
    geo1 = {w.id: w.geometry for w in spec1.widgets}
    for w in spec2.widgets:
        if w.id != "flag__extra":
            assert w.geometry == geo1[w.id]
    assert [b.flag.token for b in spec2.flags][:-1] == [
        b.flag.token for b in spec1.flags
    ]


def test_area_fidelity(demo_spec):
    for w in demo_spec.widgets:
        if w.id.startswith("out_"):
            assert w.area == "output"
        if w.id in ("flag__smoothing", "flag__palette", "flag__bins"):
            assert w.area == "update"
        if w.id in ("flag__pdb_file", "flag__verbose", "run"):
            assert w.area == "input"


def test_flag_widget_id():
    assert flag_widget_id("--max-iters") == "flag__max_iters"
    assert flag_widget_id("-v") == "flag__v"
