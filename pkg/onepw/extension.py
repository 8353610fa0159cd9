from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from onepw import common
from onepw.drawing import OnePlanarDrawing, validate_drawing
from onepw.embedding import (
    Color,
    PlaneEmbedding,
    SubEmbedding,
    insert_edges,
    sub_embedding_with_residue,
    twin,
)
from onepw.graph import Bipartition, SimpleGraph


@dataclass(frozen=True)
class ExtensionBundle:
    """
    Planarization extended by one black edge e_w per crossing vertex w.

    wedges[w] holds the darts w->x1 and w->x2, where w->x1 follows w->x2 clockwise; e_w
    runs from x1 to x2 and its first dart bounds the empty triangle (e_w, x1 w, w x2).
    """

    drawing: OnePlanarDrawing
    dxw: PlaneEmbedding
    ew_of: dict[int, int]
    wedges: dict[int, tuple[int, int]]
    f_graph: SubEmbedding
    h_graph: SubEmbedding
    a_set: frozenset[int]
    h_prime: SubEmbedding

    @cached_property
    def blacks(self) -> tuple[int, ...]:
        return tuple(v for v, c in enumerate(self.dxw.labels) if c == Color.BLACK)

    @cached_property
    def whites(self) -> tuple[int, ...]:
        return tuple(v for v, c in enumerate(self.dxw.labels) if c == Color.WHITE)

    @cached_property
    def reds(self) -> tuple[int, ...]:
        return tuple(sorted(self.ew_of))

    def ends(self, red: int) -> tuple[int, int]:
        return self.dxw.edges[self.ew_of[red]]

    @cached_property
    def parallel_classes(self) -> dict[frozenset[int], tuple[int, ...]]:
        """Crossing vertices grouped by the black pair their e_w joins."""

        result: dict[frozenset[int], list[int]] = {}
        for w in self.reds:
            result.setdefault(frozenset(self.ends(w)), []).append(w)
        return {k: tuple(v) for k, v in result.items()}

    def partner(self, red: int) -> Optional[int]:
        members = self.parallel_classes[frozenset(self.ends(red))]
        if len(members) != 2:
            return None
        return members[0] if members[1] == red else members[1]


def extend(drawing: OnePlanarDrawing) -> ExtensionBundle:
    report = validate_drawing(drawing)
    if not report.valid:
        raise common.StructuralError(f"Invalid drawing: {report.violations[0]}")
    if drawing.bipartition is None:
        raise common.ArgumentError("Extension requires a black and white colored drawing")

    p = drawing.planarization
    insertions = []
    wedges: dict[int, tuple[int, int]] = {}
    ew_of: dict[int, int] = {}
    for crossing in sorted(drawing.registry, key=lambda c: c.red):
        darts = p.rotation[crossing.red]
        black = [p.labels[p.head(d)] == Color.BLACK for d in darts]
        i = next(i for i in range(4) if black[i] and black[(i + 1) % 4])
        to_x2, to_x1 = darts[i], darts[(i + 1) % 4]
        wedges[crossing.red] = (to_x1, to_x2)
        ew_of[crossing.red] = len(p.edges) + len(insertions)
        insertions.append((twin(to_x1), twin(to_x2)))
    dxw = insert_edges(p, insertions)

    blacks = [v for v, c in enumerate(dxw.labels) if c == Color.BLACK]
    reds = sorted(ew_of)
    a_set = frozenset(
        w
        for members in _classes(dxw, ew_of).values()
        for w in members[1:]
    )
    return ExtensionBundle(
        drawing=drawing,
        dxw=dxw,
        ew_of=ew_of,
        wedges=wedges,
        f_graph=sub_embedding_with_residue(dxw, blacks + reds),
        h_graph=sub_embedding_with_residue(dxw, blacks, ew_of.values()),
        a_set=a_set,
        h_prime=sub_embedding_with_residue(
            dxw,
            blacks,
            [e for w, e in ew_of.items() if w not in a_set],
        ),
    )


def _classes(dxw: PlaneEmbedding, ew_of: dict[int, int]) -> dict[frozenset[int], list[int]]:
    result: dict[frozenset[int], list[int]] = {}
    for w in sorted(ew_of):
        result.setdefault(frozenset(dxw.edges[ew_of[w]]), []).append(w)
    return result


def check_empty_triangle(bundle: ExtensionBundle, red: int) -> bool:
    """Check that e_w and the path x1 w x2 bound a face with no black or red vertex."""

    dxw = bundle.dxw
    first = 2 * bundle.ew_of[red]
    to_x1, to_x2 = bundle.wedges[red]
    face = dxw.faces[dxw.dart_face[first]]
    triangle = {first, twin(to_x2), to_x1}
    empty = True
    for walk in face.boundary_walks:
        if set(walk) == triangle:
            continue
        if any(dxw.labels[dxw.tail(d)] in (Color.BLACK, Color.RED) for d in walk):
            empty = False
    return (
        empty
        and any(set(walk) == triangle for walk in face.boundary_walks)
        and all(dxw.labels[v] == Color.WHITE for v in face.isolated)
    )


def sides(bundle: ExtensionBundle, vertices: Iterable[int], edges: Iterable[int]) -> dict[int, int]:
    """Side (0 unbounded, 1 bounded) of every vertex off a cycle of D×_W."""

    return sub_embedding_with_residue(bundle.dxw, vertices, edges).residue


@dataclass(frozen=True)
class TwoCycle:
    first: int
    second: int
    ends: tuple[int, int]

    def __str__(self) -> str:
        return f"w={self.first},{self.second} x={self.ends[0]},{self.ends[1]}"


def _two_cycles(bundle: ExtensionBundle) -> list[TwoCycle]:
    return [
        TwoCycle(a, b, tuple(sorted(key)))  # type: ignore[arg-type]
        for key, members in sorted(bundle.parallel_classes.items(), key=lambda i: i[1])
        for a, b in itertools.combinations(members, 2)
    ]


def _side_counts(
    bundle: ExtensionBundle,
    residue: dict[int, int],
    colors: tuple[Color, ...],
) -> tuple[int, int]:
    counts = [0, 0]
    for v, side in residue.items():
        if bundle.dxw.labels[v] in colors:
            counts[side] += 1
    return counts[0], counts[1]


def find_separating_2cycles(bundle: ExtensionBundle) -> list[TwoCycle]:
    result = []
    for cycle in _two_cycles(bundle):
        residue = sides(bundle, cycle.ends, (bundle.ew_of[cycle.first], bundle.ew_of[cycle.second]))
        if min(_side_counts(bundle, residue, (Color.BLACK,))) > 0:
            result.append(cycle)
    return result


@dataclass(frozen=True)
class CheckLine:
    status: str
    name: str
    witness: str = ""

    def __str__(self) -> str:
        return f"{self.status} {self.name} {self.witness}".rstrip()


@dataclass(frozen=True)
class CheckReport:
    lines: tuple[CheckLine, ...]

    @property
    def passed(self) -> bool:
        return all(line.status != "FAIL" for line in self.lines)

    @property
    def skipped(self) -> bool:
        return any(line.status == "SKIP" for line in self.lines)

    def text(self) -> str:
        return "".join(f"{line}\n" for line in self.lines)


def _report(name: str, failures: list[str], notes: Optional[list[str]] = None) -> CheckReport:
    lines = [CheckLine("FAIL", name, f) for f in failures] or [CheckLine("PASS", name)]
    lines.extend(CheckLine("SKIP", name, n) for n in notes or [])
    return CheckReport(tuple(lines))


def _hypothesis(bundle: ExtensionBundle, name: str) -> Optional[CheckReport]:
    separating = find_separating_2cycles(bundle)
    if not separating:
        return None
    witness = f"hypothesis: separating 2-cycle {separating[0]}"
    return CheckReport((CheckLine("SKIP", name, witness),))


def check_proposition_2(bundle: ExtensionBundle) -> CheckReport:
    """Every 2-cycle of H has a side without black and red vertices."""

    name = "proposition-2"
    skipped = _hypothesis(bundle, name)
    if skipped:
        return skipped
    failures = []
    for cycle in _two_cycles(bundle):
        residue = sides(bundle, cycle.ends, (bundle.ew_of[cycle.first], bundle.ew_of[cycle.second]))
        if min(_side_counts(bundle, residue, (Color.BLACK, Color.RED))) > 0:
            failures.append(f"{cycle} (non-minimal drawing)")
    return _report(name, failures)


def check_proposition_3(bundle: ExtensionBundle) -> CheckReport:
    """Edge multiplicity of H is at most 2."""

    name = "proposition-3"
    skipped = _hypothesis(bundle, name)
    if skipped:
        return skipped
    failures = [
        f"w={','.join(map(str, members))} multiplicity={len(members)}"
        for members in sorted(bundle.parallel_classes.values())
        if len(members) > 2
    ]
    return _report(name, failures)


def h_triangles(bundle: ExtensionBundle) -> list[tuple[int, int, int]]:
    """All 3-cycles of H as triples of crossing vertices (one e_w per side)."""

    classes = bundle.parallel_classes
    result = []
    for a, b, c in itertools.combinations(bundle.blacks, 3):
        sides_ = [frozenset((a, b)), frozenset((b, c)), frozenset((a, c))]
        if all(s in classes for s in sides_):
            result.extend(itertools.product(*(classes[s] for s in sides_)))
    return result


def _triangle_residue(bundle: ExtensionBundle, triangle: tuple[int, int, int]) -> dict[int, int]:
    vertices = {v for w in triangle for v in bundle.ends(w)}
    return sides(bundle, vertices, [bundle.ew_of[w] for w in triangle])


def check_proposition_4(bundle: ExtensionBundle) -> CheckReport:
    """A partnered edge on a 3-cycle of H and its partner have their 2-paths on opposite sides."""

    name = "proposition-4"
    skipped = _hypothesis(bundle, name)
    if skipped:
        return skipped
    failures = []
    for triangle in h_triangles(bundle):
        residue = None
        for w in triangle:
            partner = bundle.partner(w)
            if partner is None:
                continue
            residue = residue or _triangle_residue(bundle, triangle)
            if residue[w] == residue[partner]:
                cycle = ",".join(map(str, triangle))
                failures.append(f"cycle w={cycle} edge w={w} partner w={partner}")
    return _report(name, failures)


def check_proposition_5(bundle: ExtensionBundle) -> CheckReport:
    """A 3-cycle of H with r <= 2 crossing vertices on one side has at least 3 - r simple edges."""

    name = "proposition-5"
    skipped = _hypothesis(bundle, name)
    if skipped:
        return skipped
    failures = []
    notes = []
    for triangle in h_triangles(bundle):
        reds = _side_counts(bundle, _triangle_residue(bundle, triangle), (Color.RED,))
        simple = sum(
            1 for w in triangle if len(bundle.parallel_classes[frozenset(bundle.ends(w))]) == 1
        )
        witness = f"cycle w={','.join(map(str, triangle))}"
        applicable = [r for r in reds if r <= 2]
        if not applicable:
            notes.append(f"{witness} r={reds[0]},{reds[1]}")
        failures.extend(
            f"{witness} r={r} simple={simple}" for r in applicable if simple < 3 - r
        )
    return _report(name, failures, notes)


@dataclass(frozen=True)
class TriangleRecord:
    face: int
    corners: tuple[int, int, int]
    interior_white: int
    interior_red: int
    interior_edges: int


def ceil_sqrt(value: int) -> int:
    return 0 if value <= 0 else math.isqrt(value - 1) + 1


def triangle_bound(record: TriangleRecord) -> int:
    return 2 * record.interior_white + 1 + ceil_sqrt(record.interior_red)


@dataclass(frozen=True)
class TriangleCensus:
    records: tuple[TriangleRecord, ...]

    @property
    def t(self) -> int:
        return len(self.records)

    def count(self, crossings: int) -> int:
        return sum(1 for r in self.records if r.interior_red == crossings)

    @property
    def anomalies(self) -> tuple[TriangleRecord, ...]:
        return tuple(r for r in self.records if r.interior_red not in (0, 1, 3))


def classify_cellular_3faces(bundle: ExtensionBundle) -> TriangleCensus:
    """Cellular 3-faces of H' with the white vertices, crossings and edges inside them."""

    hp = bundle.h_prime
    inverse = {new: old for old, new in hp.vertex_map.items()}
    graph = bundle.drawing.graph
    records = []
    for index, face in enumerate(hp.embedding.faces):
        if not face.cellular or face.size != 3:
            continue
        inside = {v for v, f in hp.residue.items() if f == index}
        whites = [v for v in inside if bundle.dxw.labels[v] == Color.WHITE]
        corners = sorted(inverse[hp.embedding.tail(d)] for d in face.boundary_walks[0])
        records.append(
            TriangleRecord(
                face=index,
                corners=tuple(corners),  # type: ignore[arg-type]
                interior_white=len(whites),
                interior_red=sum(1 for v in inside if bundle.dxw.labels[v] == Color.RED),
                interior_edges=sum(1 for u, v in graph.edges if u in inside or v in inside),
            ),
        )
    return TriangleCensus(tuple(records))


def degree_classes(graph: SimpleGraph, bipartition: Bipartition) -> dict[int, tuple[int, ...]]:
    """Vertices of Y grouped by degree."""

    result: dict[int, list[int]] = {}
    for v in bipartition.ys:
        result.setdefault(graph.degree(v), []).append(v)
    return {d: tuple(vs) for d, vs in sorted(result.items())}
