from __future__ import annotations

import dataclasses
import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from onepw import common
from onepw.embedding import (
    Color,
    PlaneEmbedding,
    euler_check,
    relabel_vertices,
    smooth,
    sub_embedding_with_residue,
)
from onepw.graph import Bipartition, Edge, Multigraph, Part, SimpleGraph
from onepw.planarity import embed_with_outer_vertices, is_planar


@dataclass(frozen=True)
class Crossing:
    red: int
    first: Edge
    second: Edge


@dataclass(frozen=True)
class OnePlanarDrawing:
    """
    Planarization of a 1-planar drawing plus its crossing registry.

    Crossing vertices are the last ids of the planarization; the remaining ids are the
    vertices of the drawn graph. Construction does not validate, see validate_drawing.
    """

    planarization: PlaneEmbedding
    registry: tuple[Crossing, ...] = ()

    @property
    def crossing_count(self) -> int:
        return len(self.registry)

    @property
    def vertex_count(self) -> int:
        return self.planarization.vertex_count - len(self.registry)

    @cached_property
    def crossing_at(self) -> dict[int, Crossing]:
        return {c.red: c for c in self.registry}

    @cached_property
    def recovered_edges(self) -> tuple[Edge, ...]:
        uncrossed = [
            (min(u, v), max(u, v))
            for u, v in self.planarization.edges
            if u < self.vertex_count and v < self.vertex_count
        ]
        crossed = [e for c in self.registry for e in (c.first, c.second)]
        return tuple(uncrossed + crossed)

    @cached_property
    def graph(self) -> SimpleGraph:
        return SimpleGraph.from_edges(self.vertex_count, self.recovered_edges)

    @cached_property
    def bipartition(self) -> Optional[Bipartition]:
        parts = []
        for color in self.planarization.labels[: self.vertex_count]:
            if color == Color.BLACK:
                parts.append(Part.X)
            elif color == Color.WHITE:
                parts.append(Part.Y)
            else:
                return None
        return Bipartition(tuple(parts))


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return not self.violations


def _alternates(drawing: OnePlanarDrawing, crossing: Crossing) -> bool:
    heads = [drawing.planarization.head(d) for d in drawing.planarization.rotation[crossing.red]]
    pairs = ({heads[0], heads[2]}, {heads[1], heads[3]})
    return pairs in (
        (set(crossing.first), set(crossing.second)),
        (set(crossing.second), set(crossing.first)),
    )


def _check_crossing(drawing: OnePlanarDrawing, crossing: Crossing) -> list[str]:
    w = crossing.red
    (a, b), (c, d) = crossing.first, crossing.second
    result = []
    if {a, b} & {c, d}:
        result.append(f"convention violation: edges crossing at {w} share a vertex")
    if drawing.planarization.degree(w) != 4:
        result.append(
            f"degree-4 violation: red vertex {w} has degree {drawing.planarization.degree(w)}",
        )
        return result
    heads = sorted(drawing.planarization.head(d) for d in drawing.planarization.rotation[w])
    if heads != sorted((a, b, c, d)):
        result.append(f"recovery violation: red vertex {w} is not joined to {a} {b} {c} {d}")
    elif not _alternates(drawing, crossing):
        result.append(f"alternation violation: edges at red vertex {w} do not cross")
    return result


def _check_colors(drawing: OnePlanarDrawing) -> list[str]:
    labels = drawing.planarization.labels
    colored = [c for c in labels[: drawing.vertex_count] if c in (Color.BLACK, Color.WHITE)]
    if not colored:
        return []
    if len(colored) != drawing.vertex_count:
        return ["color violation: vertices are only partially colored black and white"]
    return [
        f"color violation: edge ({u}, {v}) joins two {labels[u].name.lower()} vertices"
        for u, v in drawing.recovered_edges
        if labels[u] == labels[v]
    ]


def validate_drawing(drawing: OnePlanarDrawing) -> ValidationReport:
    """List every violated invariant of a 1-planar drawing; an empty report means valid."""

    p = drawing.planarization
    violations: list[str] = []
    reds = [c.red for c in drawing.registry]
    if sorted(reds) != list(range(drawing.vertex_count, p.vertex_count)):
        violations.append("recovery violation: crossing vertices must be the last vertex ids")
    for v in range(p.vertex_count):
        if (p.labels[v] == Color.RED) != (v in drawing.crossing_at):
            violations.append(f"recovery violation: vertex {v} red label and registry disagree")
    for crossing in drawing.registry:
        if crossing.red in drawing.crossing_at and 0 <= crossing.red < p.vertex_count:
            violations.extend(_check_crossing(drawing, crossing))
    for u, v in p.edges:
        if u >= drawing.vertex_count and v >= drawing.vertex_count:
            violations.append(f"recovery violation: edge ({u}, {v}) joins two crossing vertices")
    crossed = Counter(e for c in drawing.registry for e in (c.first, c.second))
    violations.extend(
        f"crossing violation: edge {e} is crossed {n} times"
        for e, n in sorted(crossed.items())
        if n > 1
    )
    recovered = Counter(drawing.recovered_edges)
    violations.extend(
        f"recovery violation: edge {e} drawn {n} times"
        for e, n in sorted(recovered.items())
        if n > 1 and e not in crossed
    )
    for u, v in recovered:
        if not (0 <= u < drawing.vertex_count and 0 <= v < drawing.vertex_count) or u == v:
            violations.append(f"recovery violation: invalid edge ({u}, {v})")
    if not euler_check(p):
        violations.append("genus violation: rotation system is not planar")
    violations.extend(_check_colors(drawing))
    return ValidationReport(tuple(violations))


def recover_graph(drawing: OnePlanarDrawing) -> SimpleGraph:
    report = validate_drawing(drawing)
    if not report.valid:
        raise common.StructuralError(f"Invalid drawing: {report.violations[0]}")
    return drawing.graph


def _labels(vertex_count: int, bipartition: Optional[Bipartition]) -> list[Color]:
    if bipartition is None:
        return [Color.PLAIN] * vertex_count
    return [Color.BLACK if p == Part.X else Color.WHITE for p in bipartition.part_of]


def check_pairs(graph: SimpleGraph, pairs: Sequence[tuple[Edge, Edge]]) -> None:
    edges = set(graph.edges)
    used: set[Edge] = set()
    for first, second in pairs:
        for e in (first, second):
            if e not in edges:
                raise common.ArgumentError(f"Edge {e} not in graph")
            if e in used:
                raise common.ArgumentError(f"Edge {e} in more than one pair")
            used.add(e)
        if set(first) & set(second):
            raise common.ArgumentError(f"Edges {first} and {second} share a vertex")


def gadget_graph(graph: SimpleGraph, pairs: Sequence[tuple[Edge, Edge]]) -> Multigraph:
    """
    Planarization with an alternation gadget per crossing.

    Vertex layout: graph vertices, then one crossing vertex per pair, then four stub
    subdivisions per pair. Edge layout: uncrossed edges, eight stub edges per pair, and
    finally the four rim edges per pair joining the subdivisions in alternating order.
    """

    n, k = graph.vertex_count, len(pairs)
    crossed = {e for pair in pairs for e in pair}
    edges = [e for e in graph.edges if e not in crossed]
    rims = []
    for i, ((a, b), (c, d)) in enumerate(pairs):
        w = n + i
        s = [n + k + 4 * i + j for j in range(4)]
        for end, sub in zip((a, b, c, d), s):
            edges.extend([(end, sub), (sub, w)])
        rims.extend([(s[0], s[2]), (s[2], s[1]), (s[1], s[3]), (s[3], s[0])])
    return Multigraph(n + 5 * k, tuple(edges + rims))


def planarize_from(
    graph: SimpleGraph,
    pairs: Sequence[tuple[Edge, Edge]],
    rim: Optional[Sequence[int]] = None,
    bipartition: Optional[Bipartition] = None,
) -> Optional[OnePlanarDrawing]:
    """
    Build a drawing in which exactly the given edge pairs cross.

    Arguments:
    ---------
    graph: Graph to draw.
    pairs: Crossing edge pairs.
    rim: If given, these vertices must lie on the unbounded face.
    bipartition: Colors for the drawing's vertices.

    Return None if no drawing with this pairing exists.
    """

    check_pairs(graph, pairs)
    gadget = gadget_graph(graph, pairs)
    verdict = is_planar(gadget) if rim is None else embed_with_outer_vertices(gadget, rim)
    if not verdict.planar:
        logging.debug("Pairing rejected: %s", pairs)
        return None
    assert verdict.embedding is not None

    n, k = graph.vertex_count, len(pairs)
    stubs = len(gadget.edges) - 4 * k
    sub = sub_embedding_with_residue(verdict.embedding, range(gadget.vertex_count), range(stubs))
    planarization = smooth(sub.embedding, range(n + k, n + 5 * k))
    planarization = dataclasses.replace(
        planarization,
        labels=tuple(_labels(n, bipartition) + [Color.RED] * k),
    )
    drawing = OnePlanarDrawing(
        planarization,
        tuple(Crossing(n + i, first, second) for i, (first, second) in enumerate(pairs)),
    )
    assert all(_alternates(drawing, c) for c in drawing.registry)
    return drawing


def relabel_drawing(drawing: OnePlanarDrawing, mapping: dict[int, int]) -> OnePlanarDrawing:
    """Rename graph vertices through a permutation; crossing vertices keep their ids."""

    full = [mapping.get(v, v) for v in range(drawing.planarization.vertex_count)]

    def edge(e: Edge) -> Edge:
        return (min(full[e[0]], full[e[1]]), max(full[e[0]], full[e[1]]))

    return OnePlanarDrawing(
        relabel_vertices(drawing.planarization, full),
        tuple(Crossing(c.red, edge(c.first), edge(c.second)) for c in drawing.registry),
    )


def double_disc_drawing(drawing: OnePlanarDrawing, rim: Sequence[int]) -> OnePlanarDrawing:
    """
    Mirror a 1-disc drawing to the outside of its disc.

    Every vertex not on the rim gets a copy drawn as the reflection of the original, so
    the result draws the graph in which all non-rim vertices are doubled, with twice the
    crossings.
    """

    p = drawing.planarization
    n, k, count = drawing.vertex_count, drawing.crossing_count, len(p.edges)
    rim_set = set(rim)
    if len(p.components) != 1:
        raise common.ArgumentError("Only connected drawings can be doubled")
    if not rim_set or not rim_set <= set(range(n)):
        raise common.ArgumentError("Rim must be a non-empty set of graph vertices")

    outer_walk = p.walks[0][p.outer[0]]
    leaving: dict[int, list[int]] = {}
    for d in outer_walk:
        leaving.setdefault(p.tail(d), []).append(d)
    for x in rim_set:
        if len(leaving.get(x, [])) != 1:
            raise common.ArgumentError(f"Rim vertex {x} does not lie once on the outer walk")

    copies = [v for v in range(n) if v not in rim_set]
    n2 = n + len(copies)

    def original(v: int) -> int:
        return v if v < n else n2 + v - n

    def mirrored(v: int) -> int:
        if v in rim_set:
            return v
        return n + copies.index(v) if v < n else n2 + k + v - n

    size = n2 + 2 * k
    edges = [(original(u), original(v)) for u, v in p.edges]
    edges += [(mirrored(u), mirrored(v)) for u, v in p.edges]
    rotation: list[tuple[int, ...]] = [()] * size
    labels = [Color.PLAIN] * size
    for v in range(p.vertex_count):
        darts = list(p.rotation[v])
        labels[original(v)] = labels[mirrored(v)] = p.labels[v]
        if v in rim_set:
            start = darts.index(leaving[v][0])
            darts = darts[start:] + darts[:start]
            rotation[v] = tuple(darts) + tuple(d + 2 * count for d in reversed(darts))
        else:
            rotation[original(v)] = tuple(darts)
            rotation[mirrored(v)] = tuple(d + 2 * count for d in reversed(darts))

    def mirror_edge(e: Edge) -> Edge:
        return (min(mirrored(e[0]), mirrored(e[1])), max(mirrored(e[0]), mirrored(e[1])))

    registry = [Crossing(original(c.red), c.first, c.second) for c in drawing.registry]
    registry += [
        Crossing(mirrored(c.red), mirror_edge(c.first), mirror_edge(c.second))
        for c in drawing.registry
    ]
    return OnePlanarDrawing(
        PlaneEmbedding(size, tuple(edges), tuple(rotation), tuple(labels)),
        tuple(registry),
    )