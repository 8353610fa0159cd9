from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from onepw import common
from onepw.drawing import OnePlanarDrawing, validate_drawing
from onepw.embedding import (
    Color,
    PlaneEmbedding,
    euler_check,
    smooth,
    sub_embedding_with_residue,
    subdivide,
)
from onepw.extension import (
    ExtensionBundle,
    TriangleCensus,
    classify_cellular_3faces,
    degree_classes,
    extend,
    find_separating_2cycles,
    triangle_bound,
)
from onepw.graph import Bipartition, Part, SimpleGraph, bipartition_of

Number = Union[int, Fraction]


def karpov_bound(n: int) -> int:
    """Edge bound for bipartite 1-planar graphs on n vertices."""

    if n < 4:
        raise common.ArgumentError(f"Vertex count must be at least 4 ({n=})")
    if n % 2 == 0 and n != 6:
        return 3 * n - 8
    return 3 * n - 9


def czap_bound(n: int, x: int) -> int:
    if x < 2 or n < 2 * x:
        raise common.ArgumentError(f"Requires 2 <= x <= n - x ({n=}, {x=})")
    return 2 * n + 6 * x - 16


def main_bound(n: int, x: int) -> int:
    if x < 2 or x > n - x:
        raise common.ArgumentError(f"Requires 2 <= x <= n - x ({n=}, {x=})")
    return 2 * n + 4 * x - 12


def removal_lower_bound(x: int, y: int) -> int:
    """Edges that must be removed from K_{x,y} to make it 1-planar."""

    if x < 2 or x > y:
        raise common.ArgumentError(f"Requires 2 <= x <= y ({x=}, {y=})")
    return max(0, (x - 2) * (y - 6))


@dataclass(frozen=True)
class LemmaVerdict:
    vertices: int
    edges: int
    components: int
    faces: int
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.edges <= self.bound


def _non_isolated(embedding: PlaneEmbedding) -> PlaneEmbedding:
    keep = [v for v in range(embedding.vertex_count) if embedding.degree(v)]
    if len(keep) < 3:
        raise common.ArgumentError(f"Requires at least 3 non-isolated vertices ({len(keep)} given)")
    return sub_embedding_with_residue(embedding, keep).embedding


def _plane_check(embedding: PlaneEmbedding, remark: bool) -> PlaneEmbedding:
    if not embedding.multigraph.is_simple:
        raise common.ArgumentError("Plane graph must be simple")
    if remark:
        return _non_isolated(embedding)
    if embedding.vertex_count < 3:
        raise common.ArgumentError(f"Requires at least 3 vertices ({embedding.vertex_count} given)")
    return embedding


def lemma7_check(embedding: PlaneEmbedding, remark: bool = False) -> LemmaVerdict:
    """
    Evaluate |E| <= 2|V| - 3 - c + t/2 with t the number of cellular 3-faces.

    With `remark`, the inequality is evaluated on the subgraph of non-isolated vertices.
    """

    g = _plane_check(embedding, remark)
    c = len(g.components)
    t = sum(1 for f in g.faces if f.cellular and f.size == 3)
    return LemmaVerdict(
        g.vertex_count,
        len(g.edges),
        c,
        t,
        2 * g.vertex_count - 3 - c + Fraction(t, 2),
    )


def lemma8_check(
    embedding: PlaneEmbedding,
    bipartition: Optional[Bipartition] = None,
    remark: bool = False,
) -> LemmaVerdict:
    """Evaluate |E| <= 2|V| - 3 - c - t with t the number of cellular faces of size >= 6."""

    graph = SimpleGraph.from_edges(embedding.vertex_count, embedding.edges)
    if bipartition is None:
        if bipartition_of(graph) is None:
            raise common.ArgumentError("Plane graph has an odd cycle")
    else:
        bipartition.check(graph)
    g = _plane_check(embedding, remark)
    c = len(g.components)
    t = sum(1 for f in g.faces if f.cellular and f.size >= 6)
    return LemmaVerdict(
        g.vertex_count,
        len(g.edges),
        c,
        t,
        Fraction(2 * g.vertex_count - 3 - c - t),
    )


@dataclass(frozen=True)
class CertificateLine:
    name: str
    status: str
    lhs: Optional[Fraction] = None
    relation: str = "<="
    rhs: Optional[Fraction] = None
    note: str = ""

    def __str__(self) -> str:
        if self.lhs is None:
            return f"{self.name}: {self.status} {self.note}".rstrip()
        return f"{self.name}: {self.lhs}{self.relation}{self.rhs} {self.status}"


_RELATIONS = {
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "=": lambda a, b: a == b,
}


def _compare(name: str, lhs: Number, relation: str, rhs: Number) -> CertificateLine:
    holds = _RELATIONS[relation](lhs, rhs)
    status = "PASS" if holds else "FAIL"
    return CertificateLine(name, status, Fraction(lhs), relation, Fraction(rhs))


@dataclass(frozen=True)
class Certificate:
    """Quantity ledger and verified inequality chain of a drawing."""

    name: str
    quantities: tuple[tuple[str, str], ...]
    lines: tuple[CertificateLine, ...]

    @property
    def failed_hypothesis(self) -> Optional[str]:
        for line in self.lines:
            if line.name.startswith("hypothesis ") and line.status == "FAIL":
                return line.name[len("hypothesis ") :]
        return None

    @property
    def status(self) -> str:
        if self.failed_hypothesis is not None:
            return "HYPOTHESIS"
        if any(line.status == "FAIL" for line in self.lines):
            return "FAIL"
        return "PASS"

    def quantity(self, key: str) -> str:
        return dict(self.quantities)[key]

    def line(self, name: str) -> CertificateLine:
        return next(line for line in self.lines if line.name == name)

    def text(self) -> str:
        body = [f"{k}={v}" for k, v in self.quantities] + [str(line) for line in self.lines]
        return "".join(f"{line}\n" for line in body)


class _Ledger:
    def __init__(self, name: str) -> None:
        self.name = name
        self.quantities: list[tuple[str, str]] = []
        self.lines: list[CertificateLine] = []

    def set(self, key: str, value: object) -> None:
        self.quantities.append((key, str(value)))

    def check(self, name: str, lhs: Number, relation: str, rhs: Number) -> bool:
        self.lines.append(_compare(name, lhs, relation, rhs))
        return self.lines[-1].status == "PASS"

    def note(self, name: str, status: str, note: str = "") -> None:
        self.lines.append(CertificateLine(name, status, note=note))

    def certificate(self) -> Certificate:
        return Certificate(self.name, tuple(self.quantities), tuple(self.lines))


def _triangle_interiors(bundle: ExtensionBundle, census: TriangleCensus) -> set[int]:
    faces = {r.face for r in census.records}
    return {v for v, f in bundle.h_prime.residue.items() if f in faces}


def _boundary_edges(bundle: ExtensionBundle, census: TriangleCensus) -> list[int]:
    """Edges of D×_W that are H' edges on the boundary of a cellular 3-face."""

    hp = bundle.h_prime
    inverse = {new: old for old, new in hp.edge_map.items()}
    edges = {
        inverse[d >> 1]
        for r in census.records
        for d in hp.embedding.faces[r.face].boundary_walks[0]
    }
    return sorted(edges)


def _materialize(
    bundle: ExtensionBundle,
    interior: set[int],
    added: list[int],
) -> PlaneEmbedding:
    """
    Plane graph left after deleting triangle interiors and one crossed edge per remaining
    crossing; the given D×_W edges are kept and subdivided with white vertices.
    """

    drawing = bundle.drawing
    dxw = bundle.dxw
    planar_edges = len(drawing.planarization.edges)
    remaining = [w for w in bundle.reds if w not in interior]
    keep = [v for v in range(dxw.vertex_count) if v not in interior]
    dropped = set()
    for w in remaining:
        first = set(drawing.crossing_at[w].first)
        dropped.update(
            i for i, (u, v) in enumerate(dxw.edges[:planar_edges]) if w in (u, v) and {u, v} & first
        )
    keep_edges = [i for i in range(planar_edges) if i not in dropped] + added
    sub = sub_embedding_with_residue(dxw, keep, keep_edges)
    result = subdivide(sub.embedding, [sub.edge_map[e] for e in added], Color.WHITE)
    return smooth(result, [sub.vertex_map[w] for w in remaining])


def _simple_bipartite_plane(embedding: PlaneEmbedding) -> tuple[bool, bool, bool]:
    labels = embedding.labels
    return (
        embedding.multigraph.is_simple,
        all(labels[u] != labels[v] for u, v in embedding.edges),
        euler_check(embedding),
    )


def certify(drawing: OnePlanarDrawing, name: str = "drawing") -> Certificate:
    """
    Replay the edge-bound argument on a concrete drawing.

    Arguments:
    ---------
    drawing: Valid drawing with black (X) and white (Y) vertices.
    name: Identifier written into the certificate.

    The hypotheses (no separating 2-cycle in H, every cellular 3-face of H' holding 0, 1
    or 3 crossings) are checked first; if one fails, the remaining lines are omitted.
    """

    report = validate_drawing(drawing)
    if not report.valid:
        raise common.StructuralError(f"Invalid drawing: {report.violations[0]}")
    bipartition = drawing.bipartition
    if bipartition is None:
        raise common.ArgumentError("Certificate requires a black and white colored drawing")
    x, y = bipartition.x, bipartition.y
    if not 2 <= x <= y:
        raise common.ArgumentError(f"Certificate requires 2 <= x <= y ({x=}, {y=})")

    graph = drawing.graph
    n, e = graph.vertex_count, len(graph.edges)
    ledger = _Ledger(name)
    for key, value in (("V", n), ("E", e), ("x", x), ("y", y), ("W", drawing.crossing_count)):
        ledger.set(key, value)

    bundle = extend(drawing)
    separating = find_separating_2cycles(bundle)
    if separating:
        ledger.note("hypothesis no-separating-2-cycles", "FAIL", str(separating[0]))
        return ledger.certificate()
    ledger.note("hypothesis no-separating-2-cycles", "PASS")

    census = classify_cellular_3faces(bundle)
    if census.anomalies:
        bad = census.anomalies[0]
        ledger.note(
            "hypothesis crossings-in-{0,1,3}",
            "FAIL",
            f"face={bad.face} j={bad.interior_red}",
        )
        return ledger.certificate()
    ledger.note("hypothesis crossings-in-{0,1,3}", "PASS")

    e_h = len(bundle.h_graph.embedding.edges)
    e_hp = len(bundle.h_prime.embedding.edges)
    simple = sum(1 for members in bundle.parallel_classes.values() if len(members) == 1)
    t, t0, t1, t3 = census.t, census.count(0), census.count(1), census.count(3)
    sum_y = sum(r.interior_white for r in census.records)
    sum_e = sum(r.interior_edges for r in census.records)
    interior = _triangle_interiors(bundle, census)
    added = _boundary_edges(bundle, census)
    m = len(added)
    for key, value in (
        ("E(H)", e_h),
        ("E(H')", e_hp),
        ("A", len(bundle.a_set)),
        ("simple", simple),
        ("t", t),
        ("t0", t0),
        ("t1", t1),
        ("t3", t3),
        ("m", m),
        (
            "triangles",
            ",".join(
                f"{r.interior_red}:{r.interior_white}:{r.interior_edges}" for r in census.records
            ),
        ),
    ):
        ledger.set(key, value)

    ledger.check("|W|=E(H)", drawing.crossing_count, "=", e_h)
    ledger.check("E(H)=E(H')+|A|", e_h, "=", e_hp + len(bundle.a_set))
    for r in census.records:
        ledger.check(
            f"face {r.face} e<=2y+1+ceil(sqrt(j))",
            r.interior_edges,
            "<=",
            triangle_bound(r),
        )
    ledger.check("sum(e)<=2sum(y)+t0+2t1+3t3", sum_e, "<=", 2 * sum_y + t0 + 2 * t1 + 3 * t3)
    if x >= 3:
        ledger.check("E(H')<=2x-4+t/2", e_hp, "<=", 2 * x - 4 + Fraction(t, 2))
        ledger.check("S(H')>=(3t0+2t1)/2", simple, ">=", Fraction(3 * t0 + 2 * t1, 2))
        ledger.check(
            "E(H)<=4x-8+t-(3t0+2t1)/2",
            e_h,
            "<=",
            4 * x - 8 + t - Fraction(3 * t0 + 2 * t1, 2),
        )
    else:
        ledger.note("E(H')<=2x-4+t/2", "SKIP", "fewer than 3 black vertices")

    whites_inside = [v for v in interior if v < n]
    v_g1 = n - len(whites_inside)
    e_g1 = sum(1 for u, v in graph.edges if u not in interior and v not in interior)
    ledger.check("V(G')=V-sum(y)", v_g1, "=", n - sum_y)
    ledger.check("E(G')=E-sum(e)", e_g1, "=", e - sum_e)

    g_star = _materialize(bundle, interior, [])
    v_gs, e_gs = g_star.vertex_count, len(g_star.edges)
    g_star2 = _materialize(bundle, interior, added)
    v_gss, e_gss = g_star2.vertex_count, len(g_star2.edges)
    for key, value in (
        ("V(G')", v_g1),
        ("E(G')", e_g1),
        ("V(G*)", v_gs),
        ("E(G*)", e_gs),
        ("V(G**)", v_gss),
        ("E(G**)", e_gss),
    ):
        ledger.set(key, value)

    ledger.check("E(G*)=E(G')-(E(H)-(t1+3t3))", e_gs, "=", e_g1 - (e_h - (t1 + 3 * t3)))
    simple_gs, bipartite_gs, plane_gs = _simple_bipartite_plane(g_star)
    ledger.note(
        "G* simple bipartite plane",
        "PASS" if simple_gs and bipartite_gs and plane_gs else "FAIL",
        f"simple={simple_gs} bipartite={bipartite_gs} euler={plane_gs}",
    )
    ledger.check("V(G**)=V(G*)+m", v_gss, "=", v_gs + m)
    ledger.check("E(G**)=E(G*)+2m", e_gss, "=", e_gs + 2 * m)
    simple_gss, bipartite_gss, plane_gss = _simple_bipartite_plane(g_star2)
    ledger.note(
        "G** simple bipartite plane",
        "PASS" if simple_gss and bipartite_gss and plane_gss else "FAIL",
        f"simple={simple_gss} bipartite={bipartite_gss} euler={plane_gss}",
    )
    if v_gss >= 3 and simple_gss and bipartite_gss:
        verdict = lemma8_check(g_star2, _bipartition_of_labels(g_star2))
        ledger.check("cells6(G**)>=t", verdict.faces, ">=", t)
        ledger.check("E(G**)<=2V(G**)-3-c-cells6", verdict.edges, "<=", verdict.bound)
    else:
        ledger.note("E(G**)<=2V(G**)-3-c-cells6", "SKIP", "fewer than 3 vertices")
    ledger.check("E(G*)<=2V(G*)-4-t", e_gs, "<=", 2 * v_gs - 4 - t)

    classes = degree_classes(graph, bipartition)
    if x == 2:
        ledger.check("E<=2y", e, "<=", 2 * y)
    elif x == 3:
        y3 = len(classes.get(3, ()))
        ledger.check("E<=2y+|Y3|", e, "<=", 2 * y + y3)
        ledger.check("|Y3|<=6", y3, "<=", 6)

    final = 2 * n + 4 * x - 12 - Fraction(t0, 2)
    if x >= 4 and e == final:
        isolated = sum(1 for v in range(x) if bundle.h_prime.embedding.degree(v) == 0)
        ledger.note("tight H' isolated vertices", "INFO", str(isolated))
    passed = ledger.check("E<=2V+4x-12-t0/2", e, "<=", final)
    logging.debug("Certificate of %s: final inequality %s", name, "holds" if passed else "fails")
    return ledger.certificate()


def _bipartition_of_labels(embedding: PlaneEmbedding) -> Bipartition:
    return Bipartition(
        tuple(Part.X if c == Color.BLACK else Part.Y for c in embedding.labels),
    )
