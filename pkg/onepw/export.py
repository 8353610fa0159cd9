"""Schematic DOT and SVG diagrams of planarizations; vertices sit on one circle per component."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from onepw import common
from onepw.drawing import OnePlanarDrawing
from onepw.embedding import Color, PlaneEmbedding
from onepw.extension import extend

FORMATS = ("dot", "svg")

_FILL = {Color.BLACK: "black", Color.WHITE: "white", Color.RED: "red", Color.PLAIN: "lightgray"}
_RADIUS = 80.0
_MARGIN = 30.0


@dataclass(frozen=True)
class Diagram:
    embedding: PlaneEmbedding
    dashed: frozenset[int] = frozenset()


def drawing_diagram(drawing: OnePlanarDrawing, bundle: bool = False) -> Diagram:
    """Diagram of D×, or of D×_W with the added e_w edges dashed if `bundle` is set."""

    if not bundle:
        return Diagram(drawing.planarization)
    extension = extend(drawing)
    return Diagram(extension.dxw, frozenset(extension.ew_of.values()))


def _edge_class(diagram: Diagram, index: int) -> str:
    if index in diagram.dashed:
        return "ew"
    labels = diagram.embedding.labels
    u, v = diagram.embedding.edges[index]
    if Color.RED in (labels[u], labels[v]):
        return "half"
    return "plain"


def to_dot(diagram: Diagram, name: str = "planarization") -> str:
    """Plain DOT text; `pos` pins every vertex to its circular layout position (neato -n)."""

    e = diagram.embedding
    positions = layout(e)
    lines = [f'graph "{name}" {{', "  node [shape=circle, style=filled, fontsize=10];"]
    for v, color in enumerate(e.labels):
        font = "white" if color in (Color.BLACK, Color.RED) else "black"
        lines.append(
            f'  {v} [label="{v}", fillcolor="{_FILL[color]}", fontcolor="{font}", '
            f'class="{color.name.lower()}", pos="{positions[v][0]:g},{positions[v][1]:g}!"];',
        )
    for i, (u, v) in enumerate(e.edges):
        kind = _edge_class(diagram, i)
        style = ", style=dashed" if kind == "ew" else ""
        lines.append(f'  {u} -- {v} [label="{i}", class="{kind}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def layout(embedding: PlaneEmbedding) -> list[tuple[float, float]]:
    """Circular layout per component, components placed left to right."""

    positions = [(0.0, 0.0)] * embedding.vertex_count
    groups = [list(c) for c in embedding.components]
    placed = {v for c in groups for v in c}
    groups.extend([v] for v in range(embedding.vertex_count) if v not in placed)
    offset = _MARGIN
    for group in groups:
        radius = _RADIUS if len(group) > 1 else 0.0
        cx, cy = offset + radius, _MARGIN + _RADIUS
        for i, v in enumerate(group):
            angle = 2 * math.pi * i / len(group)
            positions[v] = (
                round(cx + radius * math.cos(angle), 2),
                round(cy + radius * math.sin(angle), 2),
            )
        offset += 2 * radius + _MARGIN
    return positions


def to_svg(diagram: Diagram) -> str:
    e = diagram.embedding
    positions = layout(e)
    width = max((x for x, _ in positions), default=0.0) + _MARGIN
    height = 2 * (_MARGIN + _RADIUS)
    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=f"{width:g}",
        height=f"{height:g}",
        viewBox=f"0 0 {width:g} {height:g}",
    )
    edges = ET.SubElement(svg, "g", {"class": "edges"})
    for i, (u, v) in enumerate(e.edges):
        kind = _edge_class(diagram, i)
        attrs = {
            "class": kind,
            "x1": f"{positions[u][0]:g}",
            "y1": f"{positions[u][1]:g}",
            "x2": f"{positions[v][0]:g}",
            "y2": f"{positions[v][1]:g}",
            "stroke": "black",
        }
        if kind == "ew":
            attrs["stroke-dasharray"] = "4 3"
        ET.SubElement(edges, "line", attrs)
    nodes = ET.SubElement(svg, "g", {"class": "vertices"})
    for v, color in enumerate(e.labels):
        ET.SubElement(
            nodes,
            "circle",
            {
                "id": f"v{v}",
                "class": color.name.lower(),
                "cx": f"{positions[v][0]:g}",
                "cy": f"{positions[v][1]:g}",
                "r": "6",
                "fill": _FILL[color],
                "stroke": "black",
            },
        )
    return ET.tostring(svg, encoding="unicode") + "\n"


def export(diagram: Diagram, fmt: str) -> str:
    if fmt == "dot":
        return to_dot(diagram)
    if fmt == "svg":
        return to_svg(diagram)
    raise common.ArgumentError(f"Unknown export format '{fmt}'")
