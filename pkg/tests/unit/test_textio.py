from __future__ import annotations

from pathlib import Path

import pytest

from onepw import common, textio
from onepw.embedding import Color
from onepw.graph import complete_bipartite
from tests import utils


def test_load_graph() -> None:
    graph, bipartition = textio.load_graph(utils.CORPUS / "k34.graph")
    expected, expected_parts = complete_bipartite(3, 4)
    assert graph == expected
    assert bipartition == expected_parts


def test_parse_graph_without_parts() -> None:
    graph, bipartition = textio.parse_graph("v 3\ne 0 1\ne 2 1  # comment\n")
    assert graph.edges == ((0, 1), (1, 2))
    assert bipartition is None


def test_parse_graph_with_red_part() -> None:
    _, bipartition = textio.parse_graph("v 2\np 0 X\np 1 W\ne 0 1\n")
    assert bipartition is None


def test_dump_graph(tmp_path: Path) -> None:
    graph, bipartition = complete_bipartite(2, 3)
    path = tmp_path / "k23.graph"
    path.write_text(textio.dump_graph(graph, bipartition))
    assert textio.load_graph(path) == (graph, bipartition)
    assert textio.dump_graph(graph).splitlines()[:2] == ["v 5", "e 0 2"]


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("e 0 1\n", r"^line 1: vertex count must come first$"),
        ("v 2\ne 0 5\n", r"^line 2: vertex 5 out of range$"),
        ("v 2\nq 1\n", r"^line 2: unknown record 'q'$"),
        ("v 2\np 0 Z\n", r"^line 2: invalid part 'Z'$"),
        ("v 2\ne 0 x\n", r"^line 2: invalid number in '0 x'$"),
        ("v 2\ne 0\n", r"^line 2: record 'e' expects 2 fields$"),
        ("v 2\nv 3\n", r"^line 2: duplicate vertex count$"),
        ("v -1\n", r"^line 1: negative vertex count$"),
        ("# empty\n", r"^line 1: missing vertex count$"),
        ("v 2\ne 0 1\ne 1 0\n", r"^line 3: duplicate edge$"),
        ("v 2\ne 0 0\n", r"^line 2: Loops are not allowed$"),
    ],
)
def test_parse_graph_errors(text: str, message: str) -> None:
    with pytest.raises(common.ParseError, match=message):
        textio.parse_graph(text)


def test_parse_error_line() -> None:
    with pytest.raises(common.ParseError, match=r"^line 7: record 'e' expects 2 fields$") as e:
        textio.load_drawing(utils.CORPUS / "truncated.drawing")
    assert e.value.line == 7


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("v 2\ne 0 1\nr 0 0\n", r"^line 3: missing rotation of vertex 1$"),
        ("v 3\ne 0 1\nr 0 0\nr 1 0\nr 2 0\n", r"^line 5: edge 0 not incident to vertex 2$"),
        ("v 2\ne 0 1\nr 0 0 0\nr 1 0\n", r"^line 4: Dart 0 repeated or out of range at 0$"),
        ("v 2\ne 0 1\nr 0 0\nr 1 0\no 0 3\n", r"^line 5: Invalid outer walk 3 of component 0$"),
        ("v 2\nr\n", r"^line 2: rotation without vertex$"),
        ("v 2\ne 0 1\nr 0 0\nr 1 0\nn 5 0 0\n", r"^line 5: record 'n' names unknown component 5$"),
        (
            "v 2\ne 0 1\nr 0 0\nr 1 0\no 0 0\no 2 0\n",
            r"^line 6: record 'o' names unknown component 2$",
        ),
    ],
)
def test_parse_embedding_errors(text: str, message: str) -> None:
    with pytest.raises(common.ParseError, match=message):
        textio.parse_embedding(text)


def test_parse_embedding() -> None:
    embedding = textio.parse_embedding("v 3\np 2 W\ne 0 1\nr 0 0\nr 1 0\n")
    assert embedding.rotation == ((0,), (1,), ())
    assert embedding.labels == (Color.PLAIN, Color.PLAIN, Color.RED)
    assert len(embedding.components) == 2


def test_parse_nesting() -> None:
    drawing = utils.corpus_drawing("separating.drawing")
    p = drawing.planarization
    assert p.outer == (1, 0, 0)
    assert p.nesting == (None, (0, 0), None)


def test_drawing_round_trip(tmp_path: Path) -> None:
    drawing = utils.corpus_drawing("k33-disc.drawing")
    path = tmp_path / "copy.drawing"
    path.write_text(textio.dump_drawing(drawing))
    assert textio.load_drawing(path) == drawing
    assert "o 0 7\n" in path.read_text()
    assert path.read_text().endswith("x 8 2 4 1 5\n")
