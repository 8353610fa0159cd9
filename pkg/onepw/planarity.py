from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from onepw import common
from onepw.embedding import PlaneEmbedding, smooth, sub_embedding_with_residue, with_outer_face
from onepw.graph import Multigraph, SimpleGraph, bipartition_of

BRUTE_FORCE_EDGE_LIMIT = 10


@dataclass(frozen=True)
class PlanarityVerdict:
    planar: bool
    embedding: Optional[PlaneEmbedding] = None


def _too_dense(graph: Multigraph) -> bool:
    n, e = graph.vertex_count, len(graph.edges)
    if not graph.is_simple or n < 3:
        return False
    if e > 3 * n - 6:
        logging.debug("Nonplanar by edge count (%d > 3*%d-6)", e, n)
        return True
    if e > 2 * n - 4 and bipartition_of(SimpleGraph.from_edges(n, graph.edges)) is not None:
        logging.debug("Nonplanar by bipartite edge count (%d > 2*%d-4)", e, n)
        return True
    return False


def is_planar(graph: Multigraph) -> PlanarityVerdict:
    """
    Decide planarity of a multigraph and return an embedding witness.

    Repeated parallel edges are subdivided for the test and smoothed back afterwards, so
    vertex and edge ids of the witness are those of the input.
    """

    if _too_dense(graph):
        return PlanarityVerdict(planar=False)

    edges = list(graph.edges)
    extra: list[int] = []
    seen: set[tuple[int, int]] = set()
    for i, (u, v) in enumerate(graph.edges):
        if (min(u, v), max(u, v)) in seen:
            s = graph.vertex_count + len(extra)
            extra.append(s)
            edges[i] = (u, s)
            edges.append((s, v))
        seen.add((min(u, v), max(u, v)))

    total = graph.vertex_count + len(extra)
    subdivided = nx.Graph()
    subdivided.add_nodes_from(range(total))
    subdivided.add_edges_from(edges)
    planar, certificate = nx.check_planarity(subdivided)
    if not planar:
        return PlanarityVerdict(planar=False)

    dart = {}
    for i, (u, v) in enumerate(edges):
        dart[(u, v)] = 2 * i
        dart[(v, u)] = 2 * i + 1
    rotation = tuple(
        tuple(dart[(v, w)] for w in certificate.neighbors_cw_order(v))
        if len(certificate[v])
        else ()
        for v in range(total)
    )
    embedding = PlaneEmbedding(total, tuple(edges), rotation)
    if extra:
        embedding = smooth(embedding, extra)
    return PlanarityVerdict(planar=True, embedding=embedding)


def embed_with_outer_vertices(graph: Multigraph, rim: Iterable[int]) -> PlanarityVerdict:
    """
    Decide whether the graph has a plane embedding with all rim vertices on one face.

    An apex joined to every rim vertex is added; the face left behind by the deleted apex
    becomes the unbounded face of the witness.
    """

    rim = sorted(set(rim))
    for v in rim:
        if not 0 <= v < graph.vertex_count:
            raise common.ArgumentError(f"Rim vertex {v} out of range")
    if not rim:
        return is_planar(graph)

    apex = graph.vertex_count
    verdict = is_planar(
        Multigraph(apex + 1, graph.edges + tuple((v, apex) for v in rim)),
    )
    if not verdict.planar:
        return verdict
    assert verdict.embedding is not None
    sub = sub_embedding_with_residue(verdict.embedding, range(apex))
    return PlanarityVerdict(
        planar=True,
        embedding=with_outer_face(sub.embedding, sub.residue[apex]),
    )


def _face_count(vertex_count: int, edge_count: int, successor: list[int]) -> int:
    seen = [False] * (2 * edge_count)
    count = 0
    for start in range(2 * edge_count):
        if seen[start]:
            continue
        count += 1
        d = start
        while not seen[d]:
            seen[d] = True
            d = successor[d ^ 1]
    return count + vertex_count


def brute_force_planar(
    graph: Multigraph,
    choices: Optional[Mapping[int, Sequence[tuple[int, ...]]]] = None,
    limit: int = BRUTE_FORCE_EDGE_LIMIT,
) -> bool:
    """
    Try every rotation system (one dart fixed per vertex) for a genus-0 one.

    Arguments:
    ---------
    graph: Multigraph to test.
    choices: Admissible clockwise dart orders for some vertices; the others range over all.
    limit: Largest edge count accepted.
    """

    if len(graph.edges) > limit:
        raise common.SizeError(f"Brute force limited to {limit} edges ({len(graph.edges)} given)")
    choices = choices or {}
    stars: list[list[int]] = [[] for _ in range(graph.vertex_count)]
    for i, (u, v) in enumerate(graph.edges):
        stars[u].append(2 * i)
        stars[v].append(2 * i + 1)

    components = nx.number_connected_components(
        nx.MultiGraph(list(graph.edges)) if graph.edges else nx.Graph(),
    ) + sum(1 for s in stars if not s)
    isolated = sum(1 for s in stars if not s)
    target = 2 * components - graph.vertex_count + len(graph.edges) - isolated

    options = [
        list(choices[v])
        if v in choices
        else [(star[0], *rest) for rest in itertools.permutations(star[1:])]
        for v, star in enumerate(stars)
        if star
    ]
    successor = [0] * (2 * len(graph.edges))
    for choice in itertools.product(*options):
        for cycle in choice:
            for i, d in enumerate(cycle):
                successor[d] = cycle[(i + 1) % len(cycle)]
        if _face_count(0, len(graph.edges), successor) == target:
            return True
    return False
