from __future__ import annotations

import random
from pathlib import Path
from typing import Callable, Generic, Iterator, Optional, TypeVar

import networkx as nx

from onepw import textio
from onepw.drawing import OnePlanarDrawing
from onepw.graph import Bipartition, Part, SimpleGraph, bipartite_from_columns, bipartition_of

CORPUS = Path("corpus")


def do_raise(e: type[BaseException], cond: bool = True, message: Optional[str] = None) -> None:
    if cond:
        raise e(message)


def mock_time() -> Callable[[], int]:
    current = 0

    def get_time() -> int:
        nonlocal current
        current += 1
        return current

    return get_time


def corpus_drawing(name: str) -> OnePlanarDrawing:
    return textio.load_drawing(CORPUS / name)


def small_bipartite_graphs(max_edges: int) -> Iterator[tuple[SimpleGraph, Bipartition]]:
    """Bipartite graphs with edges on at most 7 vertices up to isomorphism, smaller part as X."""

    for g in nx.graph_atlas_g():
        if not 0 < g.number_of_edges() <= max_edges:
            continue
        graph = SimpleGraph.from_edges(g.number_of_nodes(), g.edges())
        bipartition = bipartition_of(graph)
        if bipartition is None:
            continue
        if bipartition.x > bipartition.y:
            swapped = (Part.Y if p == Part.X else Part.X for p in bipartition.part_of)
            bipartition = Bipartition(tuple(swapped))
        yield graph, bipartition


def dense_bipartite_graphs(count: int, seed: int) -> list[tuple[SimpleGraph, Bipartition]]:
    """Random graphs with parts of 3 and 3 to 4 vertices, every Y vertex of degree 2 or 3."""

    rand = random.Random(seed)  # noqa: S311
    return [
        bipartite_from_columns(3, [rand.choice((3, 5, 6, 7)) for _ in range(rand.randint(3, 4))])
        for _ in range(count)
    ]


QueueType = TypeVar("QueueType")


class DummyQueue(Generic[QueueType]):
    def __init__(self, length: Optional[int] = None) -> None:
        self._data: list[QueueType] = []
        self.canceled = False
        self.length = length

    def put(self, item: QueueType) -> None:
        self._data.append(item)

    def get(self) -> QueueType:
        result = self._data[0]
        self._data = self._data[1:]
        return result

    def empty(self) -> bool:
        return len(self._data) == 0

    def full(self) -> bool:
        return self.length is not None and self.length <= len(self._data)

    def cancel_join_thread(self) -> None:
        self.canceled = True


class DummyValue:
    def __init__(self, typecode: str, value: int) -> None:
        self.typecode = typecode
        self.value = value


ArgsType = TypeVar("ArgsType")


class DummyProcess(Generic[ArgsType]):
    def __init__(self, target: Callable[..., None], args: ArgsType):
        self.target = target
        self.args = args
        self.terminated = False
        self.started = False
        self.joined = False
        self.timeout: Optional[int] = None

    def start(self) -> None:
        self.started = True

    def terminate(self) -> None:
        self.terminated = True

    def join(self, timeout: int) -> None:
        self.joined = True
        self.timeout = timeout


class DummyContext(Generic[ArgsType]):
    def __init__(self) -> None:
        self.queues: list[DummyQueue[ArgsType]] = []
        self.processes: list[DummyProcess[ArgsType]] = []

    def Queue(self, length: Optional[int] = None) -> DummyQueue[ArgsType]:  # noqa: N802
        self.queues.append(DummyQueue(length))
        return self.queues[-1]

    def Value(self, typecode: str, value: int) -> DummyValue:  # noqa: N802
        return DummyValue(typecode, value)

    def Process(  # noqa: N802
        self,
        target: Callable[..., None],
        args: ArgsType,
    ) -> DummyProcess[ArgsType]:
        self.processes.append(DummyProcess(target=target, args=args))
        return self.processes[-1]


def test_dummy_queue() -> None:
    assert not DummyQueue().full()
    assert DummyQueue().empty()
    assert not DummyQueue(1).full()
    assert DummyQueue(1).empty()

    dq: DummyQueue[int] = DummyQueue(1)
    dq.put(1)
    assert not dq.empty()
    assert dq.full()
