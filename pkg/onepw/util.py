from __future__ import annotations

import logging
import re
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

from onepw import common, textio
from onepw.graph import Bipartition, SimpleGraph, complete_bipartite

_COMPLETE_BIPARTITE = re.compile(r"^K(\d+),(\d+)$")


@contextmanager
def disable_logging() -> Iterator[None]:
    previous_level = logging.root.manager.disable
    logging.disable(logging.CRITICAL)

    try:
        yield
    finally:
        logging.disable(previous_level)


def load_graph_spec(spec: str) -> tuple[SimpleGraph, Optional[Bipartition]]:
    """
    Load a graph from a file or from the shorthand `K<x>,<y>`.

    Arguments:
    ---------
    spec: Path of a graph file, or complete bipartite shorthand.
    """

    match = _COMPLETE_BIPARTITE.match(spec)
    if match:
        x, y = int(match.group(1)), int(match.group(2))
        if x < 1 or y < 1:
            raise common.ArgumentError(f"Invalid complete bipartite graph '{spec}'")
        return complete_bipartite(x, y)
    path = Path(spec)
    if not path.is_file():
        raise common.ArgumentError(f"No such graph file '{spec}'")
    return textio.load_graph(path)
