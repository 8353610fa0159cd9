from __future__ import annotations

import pytest

from onepw import common
from onepw.drawing import (
    Crossing,
    OnePlanarDrawing,
    check_pairs,
    double_disc_drawing,
    gadget_graph,
    planarize_from,
    recover_graph,
    relabel_drawing,
    validate_drawing,
)
from onepw.embedding import Color, euler_check
from onepw.graph import SimpleGraph, complete_bipartite
from tests import utils


@pytest.mark.parametrize(
    ("name", "vertices", "edges", "crossings"),
    [
        ("k36.drawing", 9, 18, 6),
        ("k33.drawing", 6, 9, 1),
        ("k33-disc.drawing", 6, 9, 3),
        ("c4.drawing", 4, 4, 0),
        ("separating.drawing", 10, 6, 2),
        ("redundant.drawing", 8, 6, 3),
    ],
)
def test_valid_corpus(name: str, vertices: int, edges: int, crossings: int) -> None:
    drawing = utils.corpus_drawing(name)
    assert validate_drawing(drawing).valid
    assert drawing.vertex_count == vertices
    assert len(drawing.graph.edges) == edges
    assert drawing.crossing_count == crossings


def test_k36_fixture() -> None:
    drawing = utils.corpus_drawing("k36.drawing")
    graph, bipartition = complete_bipartite(3, 6)
    assert recover_graph(drawing) == graph
    assert drawing.bipartition == bipartition
    assert drawing.crossing_at[9] == Crossing(9, (1, 3), (0, 4))


def test_degree_violation() -> None:
    report = validate_drawing(utils.corpus_drawing("degree3.drawing"))
    assert not report.valid
    assert "degree-4 violation: red vertex 4 has degree 3" in report.violations
    with pytest.raises(common.StructuralError, match=r"^Invalid drawing: "):
        recover_graph(utils.corpus_drawing("degree3.drawing"))


def test_alternation_violation() -> None:
    drawing = utils.corpus_drawing("k33.drawing")
    p = drawing.planarization
    rotation = list(p.rotation)
    a, b, c, d = rotation[6]
    rotation[6] = (a, c, b, d)
    broken = OnePlanarDrawing(
        type(p)(p.vertex_count, p.edges, tuple(rotation), p.labels),
        drawing.registry,
    )
    report = validate_drawing(broken)
    assert "alternation violation: edges at red vertex 6 do not cross" in report.violations


def test_shared_endpoint_violation() -> None:
    drawing = utils.corpus_drawing("k33.drawing")
    broken = OnePlanarDrawing(drawing.planarization, (Crossing(6, (0, 4), (0, 5)),))
    report = validate_drawing(broken)
    assert "convention violation: edges crossing at 6 share a vertex" in report.violations


def test_color_violation() -> None:
    drawing = utils.corpus_drawing("c4.drawing")
    p = drawing.planarization
    labels = (Color.BLACK, Color.BLACK, Color.BLACK, Color.WHITE)
    broken = OnePlanarDrawing(type(p)(p.vertex_count, p.edges, p.rotation, labels))
    report = validate_drawing(broken)
    assert report.violations == (
        "color violation: edge (0, 2) joins two black vertices",
        "color violation: edge (1, 2) joins two black vertices",
    )


def test_planarize_from() -> None:
    graph, bipartition = complete_bipartite(3, 3)
    drawing = planarize_from(graph, [((0, 4), (1, 3))], bipartition=bipartition)
    assert drawing is not None
    assert validate_drawing(drawing).valid
    assert drawing.graph == graph
    assert drawing.registry == (Crossing(6, (0, 4), (1, 3)),)
    assert drawing.planarization.labels[6] == Color.RED
    assert drawing.bipartition == bipartition
    assert planarize_from(graph, []) is None


def test_planarize_from_rim() -> None:
    graph, bipartition = complete_bipartite(2, 3)
    drawing = planarize_from(graph, [], rim=bipartition.xs)
    assert drawing is not None
    p = drawing.planarization
    assert {p.tail(d) for d in p.walks[0][p.outer[0]]} >= {0, 1}
    assert drawing.planarization.labels == (Color.PLAIN,) * 5
    assert planarize_from(graph, [], rim=bipartition.ys) is None


def test_check_pairs() -> None:
    graph, _ = complete_bipartite(3, 3)
    with pytest.raises(common.ArgumentError, match=r"^Edges \(0, 3\) and \(0, 4\) share a vertex$"):
        check_pairs(graph, [((0, 3), (0, 4))])
    with pytest.raises(common.ArgumentError, match=r"^Edge \(0, 1\) not in graph$"):
        check_pairs(graph, [((0, 1), (2, 3))])
    with pytest.raises(common.ArgumentError, match=r"^Edge \(0, 3\) in more than one pair$"):
        check_pairs(graph, [((0, 3), (1, 4)), ((0, 3), (2, 5))])


def test_gadget_graph() -> None:
    graph, _ = complete_bipartite(3, 3)
    gadget = gadget_graph(graph, [((0, 4), (1, 3))])
    assert gadget.vertex_count == 11
    assert len(gadget.edges) == 7 + 8 + 4
    assert gadget.edges[7:9] == ((0, 7), (7, 6))
    assert gadget.edges[-4:] == ((7, 9), (9, 8), (8, 10), (10, 7))


def test_relabel_drawing() -> None:
    drawing = utils.corpus_drawing("k33.drawing")
    relabeled = relabel_drawing(drawing, {0: 1, 1: 0})
    assert validate_drawing(relabeled).valid
    assert relabeled.registry == (Crossing(6, (1, 4), (0, 5)),)
    assert relabeled.graph == SimpleGraph.from_edges(
        6,
        [(1 - u if u < 2 else u, v) for u, v in drawing.graph.edges],
    )


def test_double_disc_drawing() -> None:
    disc = utils.corpus_drawing("k33-disc.drawing")
    doubled = double_disc_drawing(disc, (0, 1, 2))
    assert doubled == utils.corpus_drawing("k36.drawing")
    assert validate_drawing(doubled).valid
    assert euler_check(doubled.planarization)


def test_double_disc_drawing_invalid() -> None:
    disc = utils.corpus_drawing("k33-disc.drawing")
    with pytest.raises(common.ArgumentError, match=r"^Rim must be a non-empty set"):
        double_disc_drawing(disc, ())
    with pytest.raises(common.ArgumentError, match=r"^Rim must be a non-empty set"):
        double_disc_drawing(disc, (0, 7))
    with pytest.raises(common.ArgumentError, match=r"^Only connected drawings can be doubled$"):
        double_disc_drawing(utils.corpus_drawing("separating.drawing"), (0, 1))
