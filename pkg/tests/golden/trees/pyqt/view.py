# Generated file. Do not edit: regenerate from the specification.
# app: sbl-intervor-ABW-atomic
# spec-digest: 3a4a6ebfccf1833a
# generator: sblgen 0.1.0
"""View layer (Qt family): widget construction and state access only.

No command building happens here; that is the runtime's job.
"""

# (id, kind, area, (x, y, w, h), label, extra)
WIDGETS = (
    ("flag__pdb_file", "file_picker", "input", (140, 30, 260, 24), "PDB structure*", {"token": "--pdb-file"}),
    ("flag__verbose", "checkbox", "input", (140, 62, 160, 24), "verbose", {"token": "--verbose"}),
    ("run", "run_button", "input", (320, 260, 100, 28), "Run", {}),
    ("flag__radius", "float_spin", "input", (140, 94, 160, 24), "Probe radius", {"token": "--radius", "default": "3.0"}),
    ("flag__mode", "combo", "input", (140, 126, 160, 24), "Interface model", {"token": "--mode", "choices": ["atomic", "residue"], "default": "atomic"}),
    ("flag__max_iters", "int_spin", "input", (140, 158, 160, 24), "Max iterations", {"token": "--max-iters", "default": "100"}),
    ("out_text_log", "text_output", "output", (20, 30, 410, 120), "log", {"slot": "log", "media": "text"}),
    ("out_image_interface", "image_output", "output", (20, 160, 200, 100), "interface", {"slot": "interface", "media": "image"}),
    ("out_table_stats", "table_output", "output", (230, 160, 200, 100), "stats", {"slot": "stats", "media": "table"}),
    ("lbl_hint", "label", "output", (20, 270, 300, 20), "Interface statistics and figures", {}),
    ("flag__smoothing", "float_spin", "update", (140, 30, 120, 24), "Smoothing", {"token": "--smoothing", "default": "0.5"}),
    ("flag__palette", "combo", "update", (140, 62, 160, 24), "Palette", {"token": "--palette", "choices": ["viridis", "plasma"], "default": "viridis"}),
    ("flag__bins", "int_spin", "update", (140, 94, 160, 24), "Histogram bins", {"token": "--bins", "default": "20"}),
    ("viewer", "viewer_frame", "viewer", (0, 0, 450, 310), "3D viewer", {}),
)

AREAS = {
    "input": (10, 10, 440, 300),
    "output": (460, 10, 450, 300),
    "update": (10, 320, 440, 150),
    "viewer": (460, 320, 450, 310),
}


def widget_ids():
    return tuple(entry[0] for entry in WIDGETS)


def build(parent=None):
    """Instantiate every declared widget; returns (root, id->widget map)."""
    try:
        from pymol.Qt import QtWidgets
    except ImportError:
        from PyQt6 import QtWidgets

    root = QtWidgets.QWidget(parent)
    root.setWindowTitle("sbl-intervor-ABW-atomic")
    panels = {}
    for area, (x, y, w, h) in AREAS.items():
        box = QtWidgets.QGroupBox(area.capitalize(), root)
        box.setGeometry(x, y, w, h)
        panels[area] = box

    built = {}
    for wid, kind, area, (x, y, w, h), label, extra in WIDGETS:
        parent_box = panels[area]
        if kind == "checkbox":
            widget = QtWidgets.QCheckBox(label, parent_box)
        elif kind in ("line_entry", "file_picker"):
            widget = QtWidgets.QLineEdit(parent_box)
            widget.setPlaceholderText(label)
        elif kind == "int_spin":
            widget = QtWidgets.QSpinBox(parent_box)
            widget.setRange(-10**9, 10**9)
        elif kind == "float_spin":
            widget = QtWidgets.QDoubleSpinBox(parent_box)
            widget.setRange(-1e12, 1e12)
            widget.setDecimals(6)
        elif kind == "combo":
            widget = QtWidgets.QComboBox(parent_box)
            widget.addItems(list(extra.get("choices", ())))
        elif kind == "run_button":
            widget = QtWidgets.QPushButton(label, parent_box)
        elif kind == "text_output":
            widget = QtWidgets.QPlainTextEdit(parent_box)
            widget.setReadOnly(True)
        elif kind in ("image_output", "table_output", "html_output",
                      "pdf_output", "label", "status_bar"):
            widget = QtWidgets.QLabel(label, parent_box)
        elif kind == "viewer_frame":
            widget = QtWidgets.QFrame(parent_box)
        else:
            widget = QtWidgets.QLabel(label, parent_box)
        widget.setGeometry(x, y, w, h)
        widget.setObjectName(wid)
        built[wid] = widget
    return root, built


def read_state(built):
    """Raw widget state for the runtime; no interpretation beyond text/boolean."""
    state = {}
    for wid, kind, _area, _geo, _label, _extra in WIDGETS:
        widget = built[wid]
        if kind == "checkbox":
            state[wid] = widget.isChecked()
        elif kind in ("line_entry", "file_picker"):
            state[wid] = widget.text()
        elif kind in ("int_spin", "float_spin"):
            state[wid] = widget.text()
        elif kind == "combo":
            state[wid] = widget.currentText()
    return state


def bind_run(built, callback):
    built["run"].clicked.connect(callback)


def show_text(built, wid, text):
    widget = built[wid]
    if hasattr(widget, "setPlainText"):
        widget.setPlainText(text)
    else:
        widget.setText(text)
