from __future__ import annotations

import itertools
import random

import pytest

from onepw.embedding import PlaneEmbedding, euler_check
from onepw.graph import Multigraph
from onepw.planarity import brute_force_planar, embed_with_outer_vertices, is_planar


def labeled_graphs(n: int, edges: int) -> list[Multigraph]:
    pairs = list(itertools.combinations(range(n), 2))
    return [Multigraph(n, chosen) for chosen in itertools.combinations(pairs, edges)]


def outer_vertices(embedding: PlaneEmbedding) -> set[int]:
    outer = embedding.faces[0]
    return {embedding.tail(d) for walk in outer.boundary_walks for d in walk} | set(outer.isolated)


def check_witness(graph: Multigraph) -> bool:
    verdict = is_planar(graph)
    if verdict.embedding is not None:
        assert verdict.embedding.edges == graph.edges
        assert euler_check(verdict.embedding)
    return verdict.planar


@pytest.mark.parametrize("n", range(1, 6))
def test_is_planar_small_labeled(n: int) -> None:
    for edges in range(n * (n - 1) // 2 + 1):
        for graph in labeled_graphs(n, edges):
            assert check_witness(graph) == brute_force_planar(graph), graph.edges


@pytest.mark.parametrize("edges", range(11))
def test_is_planar_six_vertices(edges: int) -> None:
    for graph in labeled_graphs(6, edges):
        assert check_witness(graph) == brute_force_planar(graph), graph.edges


@pytest.mark.parametrize("seed", range(4))
def test_is_planar_random_multigraphs(seed: int) -> None:
    rand = random.Random(seed)  # noqa: S311
    checked = 0
    while checked < 250:
        n = rand.randint(2, 6)
        edges = [tuple(rand.sample(range(n), 2)) for _ in range(rand.randint(1, 10))]
        degree = [sum(v in e for e in edges) for v in range(n)]
        if max(degree) > 4:
            continue
        graph = Multigraph(n, tuple((u, v) for u, v in edges))
        assert check_witness(graph) == brute_force_planar(graph), graph.edges
        checked += 1


@pytest.mark.parametrize("n", range(3, 6))
def test_embed_with_outer_vertices(n: int) -> None:
    rim = (0, 1, 2)
    for edges in range(min(7, n * (n - 1) // 2) + 1):
        for graph in labeled_graphs(n, edges):
            apex = Multigraph(n + 1, graph.edges + tuple((v, n) for v in rim))
            verdict = embed_with_outer_vertices(graph, rim)
            assert verdict.planar == brute_force_planar(apex, limit=len(apex.edges)), graph.edges
            if verdict.embedding is not None:
                assert verdict.embedding.edges == graph.edges
                assert set(rim) <= outer_vertices(verdict.embedding)
