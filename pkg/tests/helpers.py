"""Independent oracles used across the test suite.

Everything in this module is deliberately written against different
machinery than the code under test (minidom instead of ElementTree,
naive line splitting, regex scans) so that agreement is meaningful.
"""

from __future__ import annotations

import re
from xml.dom import minidom


def xml_walk_widgets(document: str) -> list[dict]:
    """Generic DOM walk over a designer layout document.

    Returns one record per ``widget`` element in document order:
    ``{"name": str, "class": str, "rect": (x, y, w, h) | None}``.
    """
    dom = minidom.parseString(document)
    records: list[dict] = []

    def element_children(node):
        return [c for c in node.childNodes if c.nodeType == c.ELEMENT_NODE]

    def text_of(node) -> str:
        return "".join(
            c.data for c in node.childNodes if c.nodeType == c.TEXT_NODE
        )

    def rect_of(widget) -> tuple[int, int, int, int] | None:
        for prop in element_children(widget):
            if prop.tagName != "property" or prop.getAttribute("name") != "geometry":
                continue
            for rect in element_children(prop):
                if rect.tagName != "rect":
                    continue
                vals = {}
                for part in element_children(rect):
                    vals[part.tagName] = int(text_of(part).strip())
                return (vals["x"], vals["y"], vals["width"], vals["height"])
        return None

    def walk(node):
        if node.tagName == "widget":
            records.append(
                {
                    "name": node.getAttribute("name"),
                    "class": node.getAttribute("class"),
                    "rect": rect_of(node),
                }
            )
        for child in element_children(node):
            walk(child)

    walk(dom.documentElement)
    return records


def split_flag_lines(document: str) -> list[str]:
    """Reference line splitter: the token sequence a flags file should yield."""
    tokens = []
    for line in document.split("\n"):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens.append(line.split("|")[0].strip())
    return tokens


def scan_view_widget_ids(source: str, ids: list[str]) -> list[str]:
    """Extract widget ids from generated View source, ordered by first occurrence.

    Every backend quotes widget ids with double quotes; the scan is therefore
    idiom-independent.  Missing ids raise so inventory gaps cannot pass silently.
    """
    positions = []
    for wid in ids:
        m = re.search('"%s"' % re.escape(wid), source)
        if m is None:
            raise AssertionError(f"widget id {wid!r} not found in view source")
        positions.append((m.start(), wid))
    return [wid for _, wid in sorted(positions)]
