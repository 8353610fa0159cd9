from __future__ import annotations

import logging

import pytest

from onepw import common, textio, util
from onepw.graph import complete_bipartite
from tests import utils


def test_disable_logging(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.INFO), util.disable_logging():
        logging.info("hidden")
    assert "hidden" not in caplog.text
    with caplog.at_level(logging.INFO):
        logging.info("shown")
    assert "shown" in caplog.text


def test_load_graph_spec_shorthand() -> None:
    assert util.load_graph_spec("K3,4") == complete_bipartite(3, 4)
    assert util.load_graph_spec("K3,4") == textio.load_graph(utils.CORPUS / "k34.graph")


def test_load_graph_spec_file() -> None:
    graph, bipartition = util.load_graph_spec(str(utils.CORPUS / "k34.graph"))
    assert len(graph.edges) == 12
    assert bipartition is not None
    assert bipartition.x == 3


@pytest.mark.parametrize(
    ("spec", "message"),
    [
        ("K0,3", r"^Invalid complete bipartite graph 'K0,3'$"),
        ("corpus/missing.graph", r"^No such graph file 'corpus/missing.graph'$"),
        ("K3", r"^No such graph file 'K3'$"),
    ],
)
def test_load_graph_spec_invalid(spec: str, message: str) -> None:
    with pytest.raises(common.ArgumentError, match=message):
        util.load_graph_spec(spec)
