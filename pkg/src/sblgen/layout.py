"""Designer layout file parsing and GUI-area classification.

Layout files use the Qt Designer XML dialect with absolute pixel
geometry.  Containers named ``area_input*``, ``area_output*``,
``area_update*``, ``area_viewer*`` mark the plugin's four zones; that
naming convention is the only coupling between the layout and the rest
of the pipeline, so layouts stay authorable in any designer tool.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Iterator, Optional

from . import SblgenError


class LayoutError(SblgenError):
    pass


class MalformedXml(LayoutError):
    pass


class MissingObjectName(LayoutError):
    pass


class DuplicateObjectName(LayoutError):
    pass


class InvalidGeometry(LayoutError):
    pass


class UnsupportedLayout(LayoutError):
    """Layout-manager elements (automatic layouts) are out of scope in v1."""


class MissingArea(LayoutError):
    pass


class AmbiguousArea(LayoutError):
    pass


@dataclass(frozen=True)
class Geometry:
    """Absolute pixel rect; x/y are offsets within the parent widget."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        if self.x < 0 or self.y < 0:
            raise InvalidGeometry(f"negative position in rect {self.as_tuple()}")
        if self.w < 1 or self.h < 1:
            raise InvalidGeometry(f"non-positive size in rect {self.as_tuple()}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.w, self.h)


@dataclass
class WidgetNode:
    class_name: str
    object_name: str
    geometry: Geometry
    properties: dict[str, str] = field(default_factory=dict)
    children: list["WidgetNode"] = field(default_factory=list)

    def iter_nodes(self) -> Iterator["WidgetNode"]:
        """Preorder traversal, document order."""
        yield self
        for child in self.children:
            yield from child.iter_nodes()

    def iter_leaves(self) -> Iterator["WidgetNode"]:
        for node in self.iter_nodes():
            if not node.children:
                yield node

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class AreaMap:
    """The plugin's zones, bound to their layout containers."""

    input: WidgetNode
    output: WidgetNode
    update: Optional[WidgetNode] = None
    viewer: Optional[WidgetNode] = None

    def present(self) -> dict[str, WidgetNode]:
        out = {"input": self.input, "output": self.output}
        if self.update is not None:
            out["update"] = self.update
        if self.viewer is not None:
            out["viewer"] = self.viewer
        return out


AREA_PREFIXES = {
    "input": "area_input",
    "output": "area_output",
    "update": "area_update",
    "viewer": "area_viewer",
}


def parse_ui(document: str) -> WidgetNode:
    """Parse a designer layout document into a widget tree.

    Unknown widget classes are retained verbatim; non-geometry properties
    are kept as strings in each node's property map.
    """
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise MalformedXml(f"not parseable as XML: {exc}") from exc

    if root.tag == "ui":
        widgets = [el for el in root if el.tag == "widget"]
        if len(widgets) != 1:
            raise MalformedXml(
                f"expected exactly one root widget element, found {len(widgets)}"
            )
        root_widget = widgets[0]
    elif root.tag == "widget":
        root_widget = root
    else:
        raise MalformedXml(f"unexpected root element <{root.tag}>")

    seen: set[str] = set()
    tree = _parse_widget(root_widget, seen)
    return tree


def _parse_widget(element: ET.Element, seen: set[str]) -> WidgetNode:
    class_name = element.get("class")
    if class_name is None:
        raise MalformedXml("widget element without class attribute")
    object_name = element.get("name")
    if not object_name:
        raise MissingObjectName(f"widget of class {class_name} lacks a name attribute")
    if object_name in seen:
        raise DuplicateObjectName(object_name)
    seen.add(object_name)

    geometry: Geometry | None = None
    properties: dict[str, str] = {}
    children: list[WidgetNode] = []

    for child in element:
        if child.tag == "widget":
            children.append(_parse_widget(child, seen))
        elif child.tag == "layout":
            raise UnsupportedLayout(
                f"{object_name}: layout-manager elements are not supported; "
                "use absolute geometry"
            )
        elif child.tag == "property":
            prop_name = child.get("name")
            if prop_name == "geometry":
                geometry = _parse_rect(child, object_name)
            elif prop_name:
                properties[prop_name] = _property_value(child)
        # other designer elements (attribute, zorder, ...) pass through unused

    if geometry is None:
        raise InvalidGeometry(f"{object_name}: missing geometry rect")

    return WidgetNode(
        class_name=class_name,
        object_name=object_name,
        geometry=geometry,
        properties=properties,
        children=children,
    )


def _parse_rect(prop: ET.Element, owner: str) -> Geometry:
    rect = prop.find("rect")
    if rect is None:
        raise InvalidGeometry(f"{owner}: geometry property without rect")
    values = {}
    for key in ("x", "y", "width", "height"):
        el = rect.find(key)
        if el is None or el.text is None:
            raise InvalidGeometry(f"{owner}: rect missing <{key}>")
        try:
            values[key] = int(el.text.strip())
        except ValueError as exc:
            raise InvalidGeometry(f"{owner}: rect <{key}> not an integer") from exc
    try:
        return Geometry(values["x"], values["y"], values["width"], values["height"])
    except InvalidGeometry as exc:
        raise InvalidGeometry(f"{owner}: {exc}") from exc


def _property_value(prop: ET.Element) -> str:
    for child in prop:
        return child.text or ""
    return prop.text or ""


def serialize_ui(tree: WidgetNode) -> str:
    """Render a widget tree back to the designer XML dialect.

    Canonical form: property keys sorted, children in tree order.
    ``parse_ui(serialize_ui(t))`` reproduces ``t`` node for node.
    """
    ui = ET.Element("ui", {"version": "4.0"})
    cls = ET.SubElement(ui, "class")
    cls.text = tree.object_name
    ui.append(_widget_element(tree))
    ET.indent(ui, space=" ")
    body = ET.tostring(ui, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"


def _widget_element(node: WidgetNode) -> ET.Element:
    el = ET.Element("widget", {"class": node.class_name, "name": node.object_name})
    geom = ET.SubElement(el, "property", {"name": "geometry"})
    rect = ET.SubElement(geom, "rect")
    for key, value in zip(("x", "y", "width", "height"), node.geometry.as_tuple()):
        part = ET.SubElement(rect, key)
        part.text = str(value)
    for name in sorted(node.properties):
        prop = ET.SubElement(el, "property", {"name": name})
        string = ET.SubElement(prop, "string")
        string.text = node.properties[name]
    for child in node.children:
        el.append(_widget_element(child))
    return el


def classify_areas(tree: WidgetNode) -> AreaMap:
    """Bind ``area_*``-prefixed containers to the plugin's zones.

    Classification depends on object names only; renaming any non-area
    widget never changes the result.
    """
    found: dict[str, WidgetNode] = {}
    for node in tree.iter_nodes():
        for slot, prefix in AREA_PREFIXES.items():
            if node.object_name.startswith(prefix):
                if slot in found:
                    raise AmbiguousArea(
                        f"both {found[slot].object_name!r} and "
                        f"{node.object_name!r} match area prefix {prefix!r}"
                    )
                found[slot] = node

    for required in ("input", "output"):
        if required not in found:
            raise MissingArea(required)

    return AreaMap(
        input=found["input"],
        output=found["output"],
        update=found.get("update"),
        viewer=found.get("viewer"),
    )
