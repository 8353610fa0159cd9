from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from onepw import common, textio
from onepw.drawing import OnePlanarDrawing, relabel_drawing
from onepw.graph import Bipartition, SimpleGraph, graph_key, isomorphism

QUESTIONS = ("1planar", "mincross", "disc", "extremal")


@dataclass(frozen=True)
class CacheRecord:
    key: str
    question: str
    verdict: str
    witness: Optional[str]
    budget: str
    timestamp: float
    version: int = 1


class ResultCache:
    """
    Append-only JSON-lines store of search verdicts.

    Witness drawings are written as drawing files into a directory next to the cache
    file and referenced by name.
    """

    _VERSION = 1

    def __init__(self, file: Path) -> None:
        self._file = file
        self._records: dict[tuple[str, str], CacheRecord] = {}
        self._load()

    @property
    def witness_dir(self) -> Path:
        return self._file.with_name(self._file.name + ".witnesses")

    def _load(self) -> None:
        try:
            with self._file.open() as cf:
                lines = cf.readlines()
        except FileNotFoundError:
            return
        except OSError as e:
            logging.info("Error opening cache file: %s", e)
            return

        for number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
                if data.get("version") != self._VERSION:
                    raise common.LoadError(
                        f"Invalid version in cache file {self._file}:{number} "
                        f"(expected {self._VERSION})",
                    )
                record = CacheRecord(**data)
            except (json.JSONDecodeError, TypeError, AttributeError):
                logging.info("Malformed cache record: %s:%d", self._file, number)
                continue
            self._records[(record.key, record.question)] = record

    @property
    def records(self) -> list[CacheRecord]:
        return list(self._records.values())

    def get(self, key: str, question: str) -> Optional[CacheRecord]:
        return self._records.get((key, question))

    def put(  # noqa: PLR0913
        self,
        key: str,
        question: str,
        verdict: str,
        budget: str,
        witness: Optional[OnePlanarDrawing] = None,
    ) -> CacheRecord:
        if question not in QUESTIONS:
            raise common.ArgumentError(f"Unknown question '{question}'")
        witness_name = None
        if witness is not None:
            self.witness_dir.mkdir(parents=True, exist_ok=True)
            witness_name = f"{question}-{len(self._records)}.drawing"
            (self.witness_dir / witness_name).write_text(textio.dump_drawing(witness))
        record = CacheRecord(key, question, verdict, witness_name, budget, time.time())
        self._file.parent.mkdir(parents=True, exist_ok=True)
        with self._file.open(mode="a") as cf:
            cf.write(json.dumps(asdict(record), ensure_ascii=True) + "\n")
        self._records[(key, question)] = record
        return record

    def witness(
        self,
        record: CacheRecord,
        graph: Optional[SimpleGraph] = None,
        bipartition: Optional[Bipartition] = None,
    ) -> Optional[OnePlanarDrawing]:
        """
        Load the witness of a record, relabeled onto `graph` if given.

        Return None if the witness file is gone or does not draw a graph isomorphic to
        `graph`.
        """

        if record.witness is None:
            return None
        path = self.witness_dir / record.witness
        try:
            drawing = textio.load_drawing(path)
        except (OSError, common.ParseError) as e:
            logging.info("Unusable witness %s: %s", path, e)
            return None
        if graph is None or drawing.graph == graph:
            return drawing
        mapping = isomorphism(
            (drawing.graph, drawing.bipartition if bipartition else None),
            (graph, bipartition),
        )
        if mapping is None:
            logging.info("Witness %s does not match query graph", path)
            return None
        return relabel_drawing(drawing, mapping)


def question_key(
    graph: SimpleGraph,
    bipartition: Optional[Bipartition],
    rim: Optional[tuple[int, ...]] = None,
) -> str:
    if rim is None or (bipartition is not None and rim == bipartition.xs):
        return graph_key(graph, bipartition)
    return f"{graph_key(graph)}|rim:{','.join(str(v) for v in rim)}"
