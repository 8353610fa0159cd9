"""
Line-oriented text formats for graphs, embeddings and drawings.

    v <count>                      vertex count, first record
    p <id> X|Y|W                   part (W marks a crossing vertex)
    e <u> <v>                      edge; edges are numbered in file order
    r <vertex> <edge> ...          clockwise rotation, darts named by their edge
    n <component> <host> <walk>    component nested in a walk of another component
    o <component> <walk>           outer walk of a component
    x <w> <a> <b> <c> <d>          edges {a,b} and {c,d} cross at w

Whitespace separated; `#` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from onepw import common
from onepw.drawing import Crossing, OnePlanarDrawing
from onepw.embedding import Color, Host, PlaneEmbedding
from onepw.graph import Bipartition, Edge, Part, SimpleGraph

_ARITY = {"v": 1, "p": 2, "e": 2, "n": 3, "o": 2, "x": 5}
_COLORS = {"X": Color.BLACK, "Y": Color.WHITE, "W": Color.RED}


@dataclass
class _Records:
    vertex_count: Optional[int] = None
    parts: dict[int, str] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)
    rotations: dict[int, list[int]] = field(default_factory=dict)
    nesting: dict[int, tuple[int, int]] = field(default_factory=dict)
    outer: dict[int, int] = field(default_factory=dict)
    crossings: list[Crossing] = field(default_factory=list)
    component_lines: dict[tuple[str, int], int] = field(default_factory=dict)
    last_line: int = 0


def _vertex(records: _Records, token: int, line: int) -> int:
    assert records.vertex_count is not None
    if not 0 <= token < records.vertex_count:
        raise common.ParseError(f"vertex {token} out of range", line)
    return token


def _parse_line(records: _Records, tag: str, args: list[str], line: int) -> None:
    if tag not in _ARITY and tag != "r":
        raise common.ParseError(f"unknown record '{tag}'", line)
    if tag in _ARITY and len(args) != _ARITY[tag]:
        raise common.ParseError(f"record '{tag}' expects {_ARITY[tag]} fields", line)
    label = ""
    if tag == "p":
        label = args.pop()
        if label not in _COLORS:
            raise common.ParseError(f"invalid part '{label}'", line)
    try:
        values = [int(a) for a in args]
    except ValueError as e:
        raise common.ParseError(f"invalid number in '{' '.join(args)}'", line) from e

    if tag == "v":
        if records.vertex_count is not None:
            raise common.ParseError("duplicate vertex count", line)
        if values[0] < 0:
            raise common.ParseError("negative vertex count", line)
        records.vertex_count = values[0]
        return
    if records.vertex_count is None:
        raise common.ParseError("vertex count must come first", line)
    if tag == "p":
        records.parts[_vertex(records, values[0], line)] = label
    elif tag == "e":
        records.edges.append((_vertex(records, values[0], line), _vertex(records, values[1], line)))
    elif tag == "r":
        if not values:
            raise common.ParseError("rotation without vertex", line)
        records.rotations[_vertex(records, values[0], line)] = values[1:]
    elif tag == "n":
        records.nesting[values[0]] = (values[1], values[2])
        records.component_lines[tag, values[0]] = line
    elif tag == "o":
        records.outer[values[0]] = values[1]
        records.component_lines[tag, values[0]] = line
    else:
        w, a, b, c, d = (_vertex(records, v, line) for v in values)
        records.crossings.append(Crossing(w, (min(a, b), max(a, b)), (min(c, d), max(c, d))))


def _parse(text: str) -> _Records:
    records = _Records()
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        records.last_line = number
        if not tokens:
            continue
        _parse_line(records, tokens[0], tokens[1:], number)
    if records.vertex_count is None:
        raise common.ParseError("missing vertex count", records.last_line)
    return records


def parse_graph(text: str) -> tuple[SimpleGraph, Optional[Bipartition]]:
    records = _parse(text)
    assert records.vertex_count is not None
    try:
        graph = SimpleGraph.from_edges(records.vertex_count, records.edges)
    except common.ArgumentError as e:
        raise common.ParseError(str(e), records.last_line) from e
    if len(graph.edges) != len(records.edges):
        raise common.ParseError("duplicate edge", records.last_line)
    bipartition = None
    if records.parts and len(records.parts) == records.vertex_count:
        parts = [records.parts[v] for v in range(records.vertex_count)]
        if all(p in ("X", "Y") for p in parts):
            bipartition = Bipartition(tuple(Part(p) for p in parts))
    return graph, bipartition


def _embedding(records: _Records) -> PlaneEmbedding:
    assert records.vertex_count is not None
    degree = [0] * records.vertex_count
    for u, v in records.edges:
        degree[u] += 1
        degree[v] += 1
    rotation = []
    for v in range(records.vertex_count):
        if degree[v] and v not in records.rotations:
            raise common.ParseError(f"missing rotation of vertex {v}", records.last_line)
        darts = []
        for e in records.rotations.get(v, []):
            if not 0 <= e < len(records.edges) or v not in records.edges[e]:
                raise common.ParseError(f"edge {e} not incident to vertex {v}", records.last_line)
            darts.append(2 * e if records.edges[e][0] == v else 2 * e + 1)
        rotation.append(tuple(darts))
    labels = tuple(
        _COLORS.get(records.parts.get(v, ""), Color.PLAIN) for v in range(records.vertex_count)
    )
    try:
        base = PlaneEmbedding(records.vertex_count, tuple(records.edges), tuple(rotation), labels)
        if not records.nesting and not records.outer:
            return base
        count = len(base.components)
        for (tag, k), line in sorted(records.component_lines.items(), key=lambda i: i[1]):
            if not 0 <= k < count:
                raise common.ParseError(f"record '{tag}' names unknown component {k}", line)
        nesting: list[Host] = [records.nesting.get(k) for k in range(count)]
        outer = [records.outer.get(k, 0) for k in range(count)]
        return PlaneEmbedding(
            base.vertex_count,
            base.edges,
            base.rotation,
            base.labels,
            tuple(nesting),
            tuple(outer),
        )
    except (common.StructuralError, IndexError) as e:
        raise common.ParseError(str(e), records.last_line) from e


def parse_embedding(text: str) -> PlaneEmbedding:
    return _embedding(_parse(text))


def parse_drawing(text: str) -> OnePlanarDrawing:
    records = _parse(text)
    return OnePlanarDrawing(_embedding(records), tuple(records.crossings))


def dump_embedding(embedding: PlaneEmbedding) -> str:
    lines = [f"v {embedding.vertex_count}"]
    lines.extend(
        f"p {v} {c.value}" for v, c in enumerate(embedding.labels) if c != Color.PLAIN
    )
    lines.extend(f"e {u} {v}" for u, v in embedding.edges)
    lines.extend(
        " ".join(["r", str(v), *(str(d >> 1) for d in darts)])
        for v, darts in enumerate(embedding.rotation)
        if darts
    )
    lines.extend(
        f"n {k} {host[0]} {host[1]}" for k, host in enumerate(embedding.nesting) if host is not None
    )
    lines.extend(f"o {k} {w}" for k, w in enumerate(embedding.outer) if w != 0)
    return "\n".join(lines) + "\n"


def dump_drawing(drawing: OnePlanarDrawing) -> str:
    lines = [
        f"x {c.red} {c.first[0]} {c.first[1]} {c.second[0]} {c.second[1]}"
        for c in drawing.registry
    ]
    return dump_embedding(drawing.planarization) + "".join(f"{line}\n" for line in lines)


def dump_graph(graph: SimpleGraph, bipartition: Optional[Bipartition] = None) -> str:
    lines = [f"v {graph.vertex_count}"]
    if bipartition is not None:
        lines.extend(f"p {v} {p.value}" for v, p in enumerate(bipartition.part_of))
    lines.extend(f"e {u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def load_drawing(path: Path) -> OnePlanarDrawing:
    return parse_drawing(path.read_text())


def load_graph(path: Path) -> tuple[SimpleGraph, Optional[Bipartition]]:
    return parse_graph(path.read_text())
