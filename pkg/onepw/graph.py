from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import networkx as nx

from onepw import common

Edge = tuple[int, int]


class Part(enum.Enum):
    X = "X"
    Y = "Y"


def normalize_edges(edges: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
    return tuple(sorted({(min(u, v), max(u, v)) for u, v in edges}))


@dataclass(frozen=True)
class Multigraph:
    """Loopless multigraph; the index of an edge is its position in `edges`."""

    vertex_count: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise common.ArgumentError(f"Negative vertex count {self.vertex_count}")
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise common.ArgumentError(f"Edge ({u}, {v}) out of range")
            if u == v:
                raise common.ArgumentError(f"Loop at vertex {u}")

    @property
    def is_simple(self) -> bool:
        return len(normalize_edges(self.edges)) == len(self.edges)


@dataclass(frozen=True)
class SimpleGraph:
    vertex_count: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise common.ArgumentError(f"Negative vertex count {self.vertex_count}")
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise common.ArgumentError(f"Edge ({u}, {v}) out of range")
            if u == v:
                raise common.ArgumentError(f"Loop at vertex {u}")
        if normalize_edges(self.edges) != self.edges:
            raise common.ArgumentError("Edges must be unique, ordered pairs in ascending order")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> SimpleGraph:
        edges = list(edges)
        if any(u == v for u, v in edges):
            raise common.ArgumentError("Loops are not allowed")
        return cls(vertex_count, normalize_edges(edges))

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        neighbors: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            neighbors[u].add(v)
            neighbors[v].add(u)
        return tuple(frozenset(n) for n in neighbors)

    def degree(self, vertex: int) -> int:
        return len(self.adjacency[vertex])

    def as_multigraph(self) -> Multigraph:
        return Multigraph(self.vertex_count, self.edges)

    def to_networkx(self) -> nx.Graph:
        result = nx.Graph()
        result.add_nodes_from(range(self.vertex_count))
        result.add_edges_from(self.edges)
        return result


@dataclass(frozen=True)
class Bipartition:
    part_of: tuple[Part, ...]
    xs: tuple[int, ...] = field(init=False)
    ys: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "xs", tuple(v for v, p in enumerate(self.part_of) if p == Part.X))
        object.__setattr__(self, "ys", tuple(v for v, p in enumerate(self.part_of) if p == Part.Y))

    @property
    def x(self) -> int:
        return len(self.xs)

    @property
    def y(self) -> int:
        return len(self.ys)

    def check(self, graph: SimpleGraph) -> None:
        if len(self.part_of) != graph.vertex_count:
            raise common.ArgumentError(
                f"Bipartition covers {len(self.part_of)} of {graph.vertex_count} vertices",
            )
        for u, v in graph.edges:
            if self.part_of[u] == self.part_of[v]:
                raise common.ArgumentError(f"Edge ({u}, {v}) inside part {self.part_of[u].value}")


def complete_bipartite(x: int, y: int) -> tuple[SimpleGraph, Bipartition]:
    """Return K_{x,y} with X = 0..x-1 and Y = x..x+y-1."""

    if x < 1 or y < 1:
        raise common.ArgumentError(f"Part sizes must be positive ({x=}, {y=})")
    graph = SimpleGraph(x + y, tuple((a, x + b) for a in range(x) for b in range(y)))
    return graph, Bipartition((Part.X,) * x + (Part.Y,) * y)


def induced_subgraph(graph: SimpleGraph, keep: Iterable[int]) -> tuple[SimpleGraph, dict[int, int]]:
    """
    Return the subgraph induced by a vertex set.

    Arguments:
    ---------
    graph: Graph to restrict.
    keep: Vertices to keep; they are re-indexed in ascending order.

    The returned mapping translates old vertex ids into new ones.
    """

    kept = sorted(set(keep))
    for v in kept:
        if not 0 <= v < graph.vertex_count:
            raise common.ArgumentError(f"Vertex {v} out of range")
    mapping = {v: i for i, v in enumerate(kept)}
    edges = [(mapping[u], mapping[v]) for u, v in graph.edges if u in mapping and v in mapping]
    return SimpleGraph.from_edges(len(kept), edges), mapping


def bipartition_of(graph: SimpleGraph) -> Optional[Bipartition]:
    """Two-color a bipartite graph, putting the smallest vertex of every component into X."""

    try:
        color = nx.bipartite.color(graph.to_networkx())
    except nx.NetworkXError:
        return None
    # networkx colors the first vertex of a component 1 and isolated vertices 0
    return Bipartition(
        tuple(
            Part.X if color[v] == 1 or not graph.adjacency[v] else Part.Y
            for v in range(graph.vertex_count)
        ),
    )


def part_preserving_automorphisms(
    graph: SimpleGraph,
    bipartition: Optional[Bipartition] = None,
    limit: Optional[int] = None,
) -> list[dict[int, int]]:
    """Automorphisms mapping each part onto itself; at most `limit` of them if given."""

    g = graph.to_networkx()
    if bipartition is not None:
        nx.set_node_attributes(g, dict(enumerate(p.value for p in bipartition.part_of)), "part")
    matcher = nx.algorithms.isomorphism.GraphMatcher(
        g,
        g,
        node_match=(lambda a, b: a.get("part") == b.get("part")),
    )
    return [dict(m) for m in itertools.islice(matcher.isomorphisms_iter(), limit)]


def isomorphism(
    source: tuple[SimpleGraph, Optional[Bipartition]],
    target: tuple[SimpleGraph, Optional[Bipartition]],
) -> Optional[dict[int, int]]:
    """Return a part-preserving isomorphism from source to target, if any."""

    graphs = []
    for graph, bipartition in (source, target):
        g = graph.to_networkx()
        if bipartition is not None:
            nx.set_node_attributes(g, dict(enumerate(p.value for p in bipartition.part_of)), "part")
        graphs.append(g)
    matcher = nx.algorithms.isomorphism.GraphMatcher(
        graphs[0],
        graphs[1],
        node_match=(lambda a, b: a.get("part") == b.get("part")),
    )
    if not matcher.is_isomorphic():
        return None
    return dict(matcher.mapping)


def bipartite_matrix_key(x: int, columns: Sequence[int]) -> tuple[int, ...]:
    """
    Canonical form of a bipartite graph given as neighbor bitmasks of its Y vertices.

    Rows (X vertices) are permuted; for each row permutation the best column order is
    the sorted one, so the maximum over all row permutations is canonical.
    """

    best: tuple[int, ...] = ()
    for perm in itertools.permutations(range(x)):
        permuted = sorted(
            (sum(1 << perm[i] for i in range(x) if mask >> i & 1) for mask in columns),
            reverse=True,
        )
        best = max(best, tuple(permuted))
    return best


def graph_key(graph: SimpleGraph, bipartition: Optional[Bipartition] = None) -> str:
    """Cache key: canonical for bipartite graphs with known parts, labeled otherwise."""

    if bipartition is not None and bipartition.x <= 8:
        index = {v: i for i, v in enumerate(bipartition.xs)}
        columns = [
            sum(1 << index[u] for u in graph.adjacency[v]) for v in bipartition.ys
        ]
        key = bipartite_matrix_key(bipartition.x, columns)
        return f"bip:{bipartition.x}:{bipartition.y}:{'.'.join(str(c) for c in key)}"
    edges = ",".join(f"{u}-{v}" for u, v in graph.edges)
    return f"lab:{graph.vertex_count}:{edges}"


def bipartite_from_columns(
    x: int,
    columns: Sequence[int],
) -> tuple[SimpleGraph, Bipartition]:
    """Build a bipartite graph from X-neighbor bitmasks of its Y vertices."""

    edges = [(i, x + j) for j, mask in enumerate(columns) for i in range(x) if mask >> i & 1]
    return (
        SimpleGraph.from_edges(x + len(columns), edges),
        Bipartition((Part.X,) * x + (Part.Y,) * len(columns)),
    )
