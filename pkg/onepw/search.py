from __future__ import annotations

import atexit
import itertools
import logging
import multiprocessing as mp
import random
import sys
import time
import traceback
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Union, cast

import dill as pickle  # type: ignore[import-untyped]

from onepw import bounds, common
from onepw.drawing import OnePlanarDrawing, check_pairs, gadget_graph, planarize_from
from onepw.graph import (
    Bipartition,
    Edge,
    Multigraph,
    SimpleGraph,
    bipartite_from_columns,
    bipartite_matrix_key,
    bipartition_of,
    graph_key,
    part_preserving_automorphisms,
)
from onepw.planarity import brute_force_planar, embed_with_outer_vertices, is_planar

MPContext = Union[mp.context.ForkContext, mp.context.ForkServerContext, mp.context.SpawnContext]
MPProcess = Union[mp.context.ForkProcess, mp.context.ForkServerProcess, mp.context.SpawnProcess]

Pair = tuple[Edge, Edge]

AUTOMORPHISM_LIMIT = 2000


@dataclass(frozen=True)
class SearchBudget:
    max_crossings: int = 32
    max_nodes: int = 10_000_000
    time_limit: float = 3600.0
    use_symmetry: bool = True

    def __post_init__(self) -> None:
        for name in ("max_crossings", "max_nodes", "time_limit"):
            if getattr(self, name) <= 0:
                raise common.ArgumentError(f"Budget field {name} must be positive")


@dataclass(frozen=True)
class SearchOutcome:
    """
    Result of a crossing search.

    drawing is None and exhausted is True if no drawing exists; exhausted is False if a
    budget stopped the search before a verdict.
    """

    drawing: Optional[OnePlanarDrawing]
    crossings: Optional[int]
    exhausted: bool
    nodes: int = 0
    provenance: tuple[str, ...] = ()

    @property
    def found(self) -> bool:
        return self.drawing is not None


@dataclass(frozen=True)
class ExtremalResult:
    x: int
    y: int
    max_edges: Optional[int]
    witness: Optional[OnePlanarDrawing]
    exhausted: bool
    provenance: tuple[str, ...] = ()


@dataclass(frozen=True)
class Problem:
    """Immutable description of a pairing search, shipped to worker processes."""

    graph: SimpleGraph
    bipartition: Optional[Bipartition]
    rim: Optional[tuple[int, ...]]
    candidates: tuple[Pair, ...]
    images: tuple[tuple[int, ...], ...] = ()
    last_use: dict[Edge, int] = field(default_factory=dict)

    @classmethod
    def create(
        cls,
        graph: SimpleGraph,
        bipartition: Optional[Bipartition],
        rim: Optional[Sequence[int]],
        use_symmetry: bool,
    ) -> Problem:
        candidates = tuple(
            (e, f) for e, f in itertools.combinations(graph.edges, 2) if not set(e) & set(f)
        )
        last_use: dict[Edge, int] = {}
        for i, pair in enumerate(candidates):
            for e in pair:
                last_use[e] = i
        rim_set = None if rim is None else frozenset(rim)
        return cls(
            graph,
            bipartition,
            None if rim_set is None else tuple(sorted(rim_set)),
            candidates,
            _candidate_images(graph, bipartition, rim_set, candidates) if use_symmetry else (),
            last_use,
        )

    def beaten(self, chosen: Sequence[int]) -> bool:
        """True if some symmetry maps the pairing onto a lexicographically smaller one."""

        ordered = list(chosen)
        return any(sorted(image[i] for i in chosen) < ordered for image in self.images)

    def root_allowed(self, index: int) -> bool:
        return all(image[index] >= index for image in self.images)


def _candidate_images(
    graph: SimpleGraph,
    bipartition: Optional[Bipartition],
    rim: Optional[frozenset[int]],
    candidates: tuple[Pair, ...],
) -> tuple[tuple[int, ...], ...]:
    index = {pair: i for i, pair in enumerate(candidates)}

    def edge(mapping: dict[int, int], e: Edge) -> Edge:
        u, v = mapping[e[0]], mapping[e[1]]
        return (min(u, v), max(u, v))

    images = []
    for mapping in part_preserving_automorphisms(graph, bipartition, AUTOMORPHISM_LIMIT):
        if all(mapping[v] == v for v in mapping):
            continue
        if rim is not None and {mapping[v] for v in rim} != rim:
            continue
        images.append(
            tuple(
                index[cast(Pair, tuple(sorted((edge(mapping, e), edge(mapping, f)))))]
                for e, f in candidates
            ),
        )
    logging.debug("Using %d symmetries on %d candidate pairs", len(images), len(candidates))
    return tuple(images)


class BudgetExhaustedError(Exception):
    pass


class Explorer:
    """Depth-first search over pairings of fixed size below one root pair."""

    def __init__(
        self,
        problem: Problem,
        crossings: int,
        deadline: float,
        max_nodes: int,
        stopped: Optional[Callable[[], bool]] = None,
    ) -> None:
        self._problem = problem
        self._crossings = crossings
        self._deadline = deadline
        self._max_nodes = max_nodes
        self._stopped = stopped or (lambda: False)
        self.nodes = 0

    def run(self, root: int) -> Optional[tuple[int, ...]]:
        """Return the first feasible pairing starting with candidate `root`."""

        if self._problem.images and not self._problem.root_allowed(root):
            return None
        used = set(self._problem.candidates[root])
        return self._extend([root], used)

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self._max_nodes or time.time() > self._deadline or self._stopped():
            raise BudgetExhaustedError

    def _feasible(self, chosen: list[int], start: int) -> bool:
        problem = self._problem
        pairs = [problem.candidates[i] for i in chosen]
        crossed = {e for pair in pairs for e in pair}
        edges = [
            e
            for e in problem.graph.edges
            if e in crossed or problem.last_use.get(e, -1) < start
        ]
        gadget = gadget_graph(SimpleGraph(problem.graph.vertex_count, tuple(edges)), pairs)
        return _gadget_planar(gadget, problem.rim)

    def _extend(self, chosen: list[int], used: set[Edge]) -> Optional[tuple[int, ...]]:
        self._tick()
        problem = self._problem
        if len(chosen) == self._crossings:
            if problem.images and problem.beaten(chosen):
                return None
            pairs = [problem.candidates[i] for i in chosen]
            gadget = gadget_graph(problem.graph, pairs)
            return tuple(chosen) if _gadget_planar(gadget, problem.rim) else None
        start = chosen[-1] + 1
        if not self._feasible(chosen, start):
            return None
        needed = self._crossings - len(chosen)
        for i in range(start, len(problem.candidates) - needed + 1):
            pair = problem.candidates[i]
            if pair[0] in used or pair[1] in used:
                continue
            result = self._extend([*chosen, i], used | set(pair))
            if result is not None:
                return result
        return None


def _gadget_planar(gadget: Multigraph, rim: Optional[tuple[int, ...]]) -> bool:
    if rim is None:
        return is_planar(gadget).planar
    return embed_with_outer_vertices(gadget, rim).planar


@dataclass(frozen=True)
class Job:
    crossings: int
    root: int
    deadline: float
    max_nodes: int


@dataclass
class StatusBase:
    wid: int


@dataclass
class Bug(StatusBase):
    message: str


@dataclass
class Finished(StatusBase):
    job: Job
    chosen: Optional[tuple[int, ...]]
    nodes: int
    complete: bool


def worker(
    wid: int,
    problem_bytes: bytes,
    job_queue: mp.Queue[Optional[Job]],
    result_queue: mp.Queue[StatusBase],
    stop: mp.sharedctypes.Synchronized[int],
) -> None:
    try:
        worker_loop(
            wid=wid,
            problem_bytes=problem_bytes,
            job_queue=job_queue,
            result_queue=result_queue,
            stop=stop,
        )
    except KeyboardInterrupt:  # pragma: no cover
        raise
    except Exception:  # noqa: BLE001
        result_queue.put(Bug(wid=wid, message=traceback.format_exc()))


def worker_loop(
    wid: int,
    problem_bytes: bytes,
    job_queue: mp.Queue[Optional[Job]],
    result_queue: mp.Queue[StatusBase],
    stop: mp.sharedctypes.Synchronized[int],
) -> None:
    logging.captureWarnings(capture=True)
    logging.getLogger().setLevel(logging.ERROR)

    problem = cast(Problem, pickle.loads(problem_bytes))  # noqa: S301

    while True:
        job = job_queue.get()
        if job is None:
            return
        explorer = Explorer(
            problem,
            job.crossings,
            job.deadline,
            job.max_nodes,
            lambda: bool(stop.value),
        )
        try:
            chosen = explorer.run(job.root)
        except BudgetExhaustedError:
            result_queue.put(
                Finished(wid=wid, job=job, chosen=None, nodes=explorer.nodes, complete=False),
            )
            continue
        result_queue.put(
            Finished(wid=wid, job=job, chosen=chosen, nodes=explorer.nodes, complete=True),
        )


class WorkerPool:
    def __init__(
        self,
        problem: Problem,
        num_workers: int,
        start_method: Optional[str] = None,
    ) -> None:
        mp_ctx: MPContext = (
            mp.get_context("fork")
            if start_method == "fork"
            else mp.get_context("forkserver")
            if start_method == "forkserver"
            else mp.get_context("spawn")
        )
        self._stop = mp_ctx.Value("b", 0)
        self._job_queue: mp.Queue[Optional[Job]] = mp_ctx.Queue()
        self._result_queue: mp.Queue[StatusBase] = mp_ctx.Queue()
        problem_bytes = pickle.dumps(problem)
        self._workers: list[MPProcess] = [
            mp_ctx.Process(
                target=worker,
                args=(wid, problem_bytes, self._job_queue, self._result_queue, self._stop),
            )
            for wid in range(num_workers)
        ]
        for p in self._workers:
            p.start()
        atexit.register(self.terminate_workers)

    def terminate_workers(self) -> None:
        if not self._workers:
            return

        for _ in self._workers:
            self._job_queue.put(None)

        self._result_queue.cancel_join_thread()
        self._job_queue.cancel_join_thread()

        for p in self._workers:
            p.terminate()
            p.join(timeout=1)

        del self._workers[:]

    def explore(self, jobs: list[Job]) -> tuple[Optional[tuple[int, ...]], int, bool]:
        self._stop.value = 0
        for job in jobs:
            self._job_queue.put(job)
        found: Optional[tuple[int, ...]] = None
        nodes = 0
        complete = True
        for _ in jobs:
            result = self._result_queue.get()
            if isinstance(result, Bug):
                self.terminate_workers()
                sys.exit(
                    "===================================================================\n"
                    "                          INTERNAL ERROR.                          \n"
                    "===================================================================\n"
                    f"{result.message}                                                   \n"
                    "===================================================================\n",
                )
            assert isinstance(result, Finished)
            nodes += result.nodes
            if result.chosen is not None and (found is None or result.chosen < found):
                found = result.chosen
                self._stop.value = 1
            elif not result.complete and found is None:
                complete = False
        return found, nodes, complete


def _explore_serial(
    problem: Problem,
    jobs: list[Job],
) -> tuple[Optional[tuple[int, ...]], int, bool]:
    nodes = 0
    for job in jobs:
        explorer = Explorer(problem, job.crossings, job.deadline, job.max_nodes - nodes)
        try:
            chosen = explorer.run(job.root)
        except BudgetExhaustedError:
            return None, nodes + explorer.nodes, False
        nodes += explorer.nodes
        if chosen is not None:
            return chosen, nodes, True
    return None, nodes, True


def _bipartite_screens(
    graph: SimpleGraph,
    bipartition: Optional[Bipartition],
) -> tuple[int, Optional[str], list[str]]:
    """Return a lower bound on crossings, a rejection reason and the provenance of both."""

    n, e = graph.vertex_count, len(graph.edges)
    provenance = []
    parts = bipartition or bipartition_of(graph)
    if parts is None:
        lower = max(0, e - (3 * n - 6)) if n >= 3 else 0
        provenance.append(f"screen planar: crossings>={lower}")
        return lower, None, provenance
    lower = max(0, e - (2 * n - 4)) if n >= 3 else 0
    provenance.append(f"screen bipartite-planar: crossings>={lower}")
    if n >= 4 and e > bounds.karpov_bound(n):
        reason = f"screen karpov: E={e}>{bounds.karpov_bound(n)}"
        provenance.append(reason)
        return lower, reason, provenance
    x = min(parts.x, parts.y)
    if x >= 2 and e > bounds.main_bound(n, x):
        reason = f"screen main: E={e}>{bounds.main_bound(n, x)}"
        provenance.append(reason)
        return lower, reason, provenance
    return lower, None, provenance


def _disc_lower(graph: SimpleGraph, bipartition: Optional[Bipartition], rim: Sequence[int]) -> int:
    n, e = graph.vertex_count, len(graph.edges)
    parts = bipartition or bipartition_of(graph)
    one_side = parts is not None and len({parts.part_of[v] for v in rim}) <= 1
    if one_side:
        return max(0, e + len(rim) - 2 * n + 2)
    return max(0, e + len(rim) - 3 * n + 3)


def _minimize(  # noqa: PLR0913
    graph: SimpleGraph,
    bipartition: Optional[Bipartition],
    rim: Optional[Sequence[int]],
    budget: SearchBudget,
    lower: int,
    provenance: list[str],
    jobs: int = 1,
    start_method: Optional[str] = None,
    deadline: Optional[float] = None,
) -> SearchOutcome:
    deadline = deadline if deadline is not None else time.time() + budget.time_limit
    problem = Problem.create(graph, bipartition, rim, budget.use_symmetry)
    most = len(graph.edges) // 2
    upper = min(most, budget.max_crossings)
    pool = WorkerPool(problem, jobs, start_method) if jobs > 1 else None
    nodes = 0
    try:
        for k in range(lower, upper + 1):
            logging.debug("Trying %d crossings", k)
            if k == 0:
                nodes += 1
                drawing = planarize_from(graph, [], rim, bipartition)
                if drawing is not None:
                    return SearchOutcome(drawing, 0, True, nodes, tuple(provenance))
                continue
            batch = [
                Job(k, root, deadline, budget.max_nodes - nodes)
                for root in range(len(problem.candidates))
            ]
            if pool is None:
                chosen, spent, complete = _explore_serial(problem, batch)
            else:
                chosen, spent, complete = pool.explore(batch)
            nodes += spent
            if chosen is not None:
                pairs = [problem.candidates[i] for i in chosen]
                drawing = planarize_from(graph, pairs, rim, bipartition)
                assert drawing is not None
                logging.info("Found drawing with %d crossings after %d nodes", k, nodes)
                return SearchOutcome(drawing, k, True, nodes, tuple(provenance))
            if not complete or nodes >= budget.max_nodes:
                provenance.append(f"budget exhausted at {k} crossings")
                return SearchOutcome(None, None, False, nodes, tuple(provenance))
    finally:
        if pool is not None:
            pool.terminate_workers()
    if upper < most:
        provenance.append(f"budget exhausted above {upper} crossings")
        return SearchOutcome(None, None, False, nodes, tuple(provenance))
    return SearchOutcome(None, None, True, nodes, tuple(provenance))


def min_crossings_one_planar(  # noqa: PLR0913
    graph: SimpleGraph,
    budget: Optional[SearchBudget] = None,
    bipartition: Optional[Bipartition] = None,
    jobs: int = 1,
    start_method: Optional[str] = None,
    deadline: Optional[float] = None,
) -> SearchOutcome:
    """
    Find a 1-planar drawing with the fewest crossings.

    Arguments:
    ---------
    graph: Graph to draw.
    budget: Search limits.
    bipartition: Colors of the returned drawing; also enables the bipartite screens.
    jobs: Number of worker processes (1 searches in-process).
    start_method: Multiprocessing start method (spawn, forkserver or fork).
    deadline: Absolute time limit overriding budget.time_limit.
    """

    budget = budget or SearchBudget()
    if bipartition is not None:
        bipartition.check(graph)
    lower, rejected, provenance = _bipartite_screens(graph, bipartition)
    if rejected:
        logging.info("Rejected without search (%s)", rejected)
        return SearchOutcome(None, None, True, 0, tuple(provenance))
    return _minimize(
        graph, bipartition, None, budget, lower, provenance, jobs, start_method, deadline,
    )


def decide_one_planar(  # noqa: PLR0913
    graph: SimpleGraph,
    budget: Optional[SearchBudget] = None,
    bipartition: Optional[Bipartition] = None,
    jobs: int = 1,
    start_method: Optional[str] = None,
    deadline: Optional[float] = None,
) -> SearchOutcome:
    """Decide 1-planarity; the witness, if any, has the fewest possible crossings."""

    return min_crossings_one_planar(graph, budget, bipartition, jobs, start_method, deadline)


def disc_min_crossings(  # noqa: PLR0913
    graph: SimpleGraph,
    rim: Sequence[int],
    budget: Optional[SearchBudget] = None,
    bipartition: Optional[Bipartition] = None,
    jobs: int = 1,
    start_method: Optional[str] = None,
) -> SearchOutcome:
    """Find a 1-planar drawing with all rim vertices on the unbounded face and fewest crossings."""

    budget = budget or SearchBudget()
    if bipartition is not None:
        bipartition.check(graph)
    for v in rim:
        if not 0 <= v < graph.vertex_count:
            raise common.ArgumentError(f"Rim vertex {v} out of range")
    lower = _disc_lower(graph, bipartition, rim)
    provenance = [f"screen disc-planar: crossings>={lower}"]
    return _minimize(graph, bipartition, rim, budget, lower, provenance, jobs, start_method)


def column_multisets(x: int, y: int, edges: int) -> Iterator[tuple[int, ...]]:
    """Non-isomorphic bipartite graphs with parts x, y and the given edge count as column masks."""

    weight = [bin(mask).count("1") for mask in range(1 << x)]
    seen: set[tuple[int, ...]] = set()

    def extend(prefix: list[int], remaining: int) -> Iterator[tuple[int, ...]]:
        left = y - len(prefix)
        if left == 0:
            if remaining == 0:
                yield tuple(prefix)
            return
        top = prefix[-1] if prefix else (1 << x) - 1
        for mask in range(top, -1, -1):
            w = weight[mask]
            if w > remaining or remaining - w > x * (left - 1):
                continue
            yield from extend([*prefix, mask], remaining - w)

    for columns in extend([], edges):
        key = bipartite_matrix_key(x, columns)
        if key not in seen:
            seen.add(key)
            yield key


def extremal_search(  # noqa: PLR0913
    x: int,
    y: int,
    budget: Optional[SearchBudget] = None,
    jobs: int = 1,
    start_method: Optional[str] = None,
) -> ExtremalResult:
    """
    Maximum edge count of a bipartite 1-planar graph with parts of sizes exactly x and y.

    Edge counts are tried downwards from the smallest closed-form upper bound; the first
    count with a 1-planar representative gives the result.
    """

    budget = budget or SearchBudget()
    if not 2 <= x <= y:
        raise common.ArgumentError(f"Requires 2 <= x <= y ({x=}, {y=})")
    n = x + y
    upper = min(x * y, bounds.main_bound(n, x), bounds.karpov_bound(n) if n >= 4 else x * y)
    provenance = [f"upper bound {upper}"]
    deadline = time.time() + budget.time_limit
    exhausted = True
    for m in range(upper, -1, -1):
        logging.info("Searching %d edges", m)
        for columns in column_multisets(x, y, m):
            graph, bipartition = bipartite_from_columns(x, columns)
            outcome = decide_one_planar(graph, budget, bipartition, jobs, start_method, deadline)
            if outcome.found:
                provenance.append(f"witness {graph_key(graph, bipartition)}")
                return ExtremalResult(x, y, m, outcome.drawing, exhausted, tuple(provenance))
            if not outcome.exhausted:
                exhausted = False
                provenance.append(f"undecided {graph_key(graph, bipartition)}")
            if time.time() > deadline:
                provenance.append("time limit reached")
                return ExtremalResult(x, y, None, None, False, tuple(provenance))
    return ExtremalResult(x, y, None, None, False, tuple(provenance))


def random_bipartite_samples(
    x: int,
    y_max: int,
    count: int,
    seed: int = 0,
) -> list[tuple[SimpleGraph, Bipartition]]:
    if x < 1 or y_max < 1 or count < 0:
        raise common.ArgumentError(f"Invalid sample parameters ({x=}, {y_max=}, {count=})")
    rand = random.Random(seed)  # noqa: S311
    return [
        bipartite_from_columns(
            x,
            [rand.randrange(1 << x) for _ in range(rand.randint(1, y_max))],
        )
        for _ in range(count)
    ]


@dataclass(frozen=True)
class Problem5Record:
    key: str
    x: int
    y: int
    edges: int
    crossings: Optional[int]
    bound: Fraction

    @property
    def holds(self) -> Optional[bool]:
        if self.crossings is None:
            return None
        return self.edges <= self.bound

    def __str__(self) -> str:
        verdict = {True: "holds", False: "VIOLATED", None: "no-disc-drawing"}[self.holds]
        return f"{self.key} E={self.edges} bound={self.bound} k={self.crossings} {verdict}"


def problem5_bound(x: int, y: int) -> Fraction:
    return 2 * y + Fraction(5 * x, 3) - 2


def probe_problem5(
    samples: Sequence[tuple[SimpleGraph, Bipartition]],
    budget: Optional[SearchBudget] = None,
) -> list[Problem5Record]:
    """Compare sampled graphs that have a disc drawing against |E| <= 2|Y| + 5|X|/3 - 2."""

    records = []
    for graph, bipartition in samples:
        outcome = disc_min_crossings(graph, bipartition.xs, budget, bipartition)
        records.append(
            Problem5Record(
                graph_key(graph, bipartition),
                bipartition.x,
                bipartition.y,
                len(graph.edges),
                outcome.crossings if outcome.found else None,
                problem5_bound(bipartition.x, bipartition.y),
            ),
        )
        logging.debug("%s", records[-1])
    return records


def planarization_multigraph(graph: SimpleGraph, pairs: Sequence[Pair]) -> Multigraph:
    """Planarization without gadget: one degree-4 vertex per crossing pair."""

    n = graph.vertex_count
    crossed = {e for pair in pairs for e in pair}
    edges = [e for e in graph.edges if e not in crossed]
    for i, ((a, b), (c, d)) in enumerate(pairs):
        edges.extend([(a, n + i), (c, n + i), (b, n + i), (d, n + i)])
    return Multigraph(n + len(pairs), tuple(edges))


def brute_force_min_crossings(graph: SimpleGraph, limit: int = 20) -> Optional[int]:
    """
    Fewest crossings of a 1-planar drawing found by trying every rotation system of every
    planarization; crossing vertices only get the two alternating rotations.
    """

    candidates = [
        (e, f) for e, f in itertools.combinations(graph.edges, 2) if not set(e) & set(f)
    ]
    for k in range(len(graph.edges) // 2 + 1):
        for pairs in itertools.combinations(candidates, k):
            if len({e for pair in pairs for e in pair}) < 2 * k:
                continue
            check_pairs(graph, pairs)
            planarization = planarization_multigraph(graph, pairs)
            base = len(planarization.edges) - 4 * k
            choices = {}
            for i in range(k):
                a, c, b, d = (2 * (base + 4 * i + j) + 1 for j in range(4))
                choices[graph.vertex_count + i] = [(a, c, b, d), (a, d, b, c)]
            if brute_force_planar(planarization, choices, limit):
                return k
    return None
