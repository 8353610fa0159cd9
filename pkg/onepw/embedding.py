from __future__ import annotations

import dataclasses
import enum
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence

from networkx.utils import UnionFind

from onepw import common
from onepw.graph import Edge, Multigraph

Walk = tuple[int, ...]
Host = Optional[tuple[int, int]]


class Color(enum.Enum):
    BLACK = "X"
    WHITE = "Y"
    RED = "W"
    PLAIN = "-"


def twin(dart: int) -> int:
    return dart ^ 1


def edge_of(dart: int) -> int:
    return dart >> 1


@dataclass(frozen=True)
class FaceRecord:
    boundary_walks: tuple[Walk, ...]
    isolated: tuple[int, ...]
    host: Host

    @property
    def size(self) -> int:
        return sum(len(w) for w in self.boundary_walks)

    @property
    def cellular(self) -> bool:
        return len(self.boundary_walks) == 1 and not self.isolated


@dataclass(frozen=True)
class PlaneEmbedding:
    """
    Plane multigraph given by a rotation system.

    Edge i contributes dart 2i (leaving edges[i][0]) and dart 2i+1 (leaving edges[i][1]).
    rotation[v] lists the darts leaving v in clockwise order. Components are ordered by
    their smallest vertex, the boundary walks of a component by their smallest dart; an
    isolated vertex has a single empty walk. nesting[k] names the (component, walk) whose
    face contains component k, or None if k lies in the unbounded region. outer[k] is the
    walk of component k that faces outwards.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    rotation: tuple[tuple[int, ...], ...]
    labels: tuple[Color, ...] = ()
    nesting: tuple[Host, ...] = ()
    outer: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.labels:
            object.__setattr__(self, "labels", (Color.PLAIN,) * self.vertex_count)
        if len(self.labels) != self.vertex_count:
            raise common.StructuralError("Label count does not match vertex count")
        if len(self.rotation) != self.vertex_count:
            raise common.StructuralError("Rotation count does not match vertex count")
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count) or u == v:
                raise common.StructuralError(f"Invalid edge ({u}, {v})")
        seen = [False] * (2 * len(self.edges))
        for v, darts in enumerate(self.rotation):
            for d in darts:
                if not 0 <= d < len(seen) or seen[d]:
                    raise common.StructuralError(f"Dart {d} repeated or out of range at {v}")
                if self.tail(d) != v:
                    raise common.StructuralError(f"Dart {d} does not leave vertex {v}")
                seen[d] = True
        if not all(seen):
            raise common.StructuralError(f"Dart {seen.index(False)} missing from rotation")

        count = len(self.components)
        if not self.nesting:
            object.__setattr__(self, "nesting", (None,) * count)
        if not self.outer:
            object.__setattr__(self, "outer", (0,) * count)
        self._check_nesting()

    def _check_nesting(self) -> None:
        count = len(self.components)
        if len(self.nesting) != count or len(self.outer) != count:
            raise common.StructuralError("Nesting does not match component count")
        for k, w in enumerate(self.outer):
            if not 0 <= w < len(self.walks[k]):
                raise common.StructuralError(f"Invalid outer walk {w} of component {k}")
        for k, host in enumerate(self.nesting):
            if host is None:
                continue
            h, w = host
            if not 0 <= h < count or h == k:
                raise common.StructuralError(f"Invalid host component {h} of component {k}")
            if not 0 <= w < len(self.walks[h]) or w == self.outer[h]:
                raise common.StructuralError(f"Invalid host face {w} of component {k}")
        for k in range(count):
            visited = {k}
            host = self.nesting[k]
            while host is not None:
                if host[0] in visited:
                    raise common.StructuralError(f"Cyclic nesting at component {k}")
                visited.add(host[0])
                host = self.nesting[host[0]]

    def tail(self, dart: int) -> int:
        return self.edges[dart >> 1][dart & 1]

    def head(self, dart: int) -> int:
        return self.edges[dart >> 1][1 - (dart & 1)]

    def degree(self, vertex: int) -> int:
        return len(self.rotation[vertex])

    @property
    def multigraph(self) -> Multigraph:
        return Multigraph(self.vertex_count, self.edges)

    @cached_property
    def successor(self) -> tuple[int, ...]:
        result = [0] * (2 * len(self.edges))
        for darts in self.rotation:
            for i, d in enumerate(darts):
                result[d] = darts[(i + 1) % len(darts)]
        return tuple(result)

    @cached_property
    def predecessor(self) -> tuple[int, ...]:
        result = [0] * (2 * len(self.edges))
        for d, s in enumerate(self.successor):
            result[s] = d
        return tuple(result)

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        uf = UnionFind(range(self.vertex_count))
        for u, v in self.edges:
            uf.union(u, v)
        roots: dict[int, int] = {}
        result = []
        for v in range(self.vertex_count):
            result.append(roots.setdefault(uf[v], len(roots)))
        return tuple(result)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        members: list[list[int]] = [[] for _ in set(self.component_of)]
        for v, k in enumerate(self.component_of):
            members[k].append(v)
        return tuple(tuple(m) for m in members)

    @cached_property
    def walks(self) -> tuple[tuple[Walk, ...], ...]:
        per_component: list[list[Walk]] = [[] for _ in self.components]
        seen = [False] * (2 * len(self.edges))
        for start in range(len(seen)):
            if seen[start]:
                continue
            walk = []
            d = start
            while not seen[d]:
                seen[d] = True
                walk.append(d)
                d = self.successor[twin(d)]
            per_component[self.component_of[self.tail(start)]].append(tuple(walk))
        for k, members in enumerate(self.components):
            if not per_component[k]:
                assert len(members) == 1
                per_component[k].append(())
        return tuple(tuple(w) for w in per_component)

    @cached_property
    def walk_face(self) -> dict[tuple[int, int], int]:
        """Face index of every (component, walk) pair."""

        result: dict[tuple[int, int], int] = {}
        index = 1
        for k, walks in enumerate(self.walks):
            for w in range(len(walks)):
                if w != self.outer[k]:
                    result[(k, w)] = index
                    index += 1
        for k, host in enumerate(self.nesting):
            result[(k, self.outer[k])] = 0 if host is None else result[host]
        return result

    @cached_property
    def faces(self) -> tuple[FaceRecord, ...]:
        hosts: list[Host] = [None]
        for k, walks in enumerate(self.walks):
            hosts.extend((k, w) for w in range(len(walks)) if w != self.outer[k])
        walks: list[list[Walk]] = [[] for _ in hosts]
        isolated: list[list[int]] = [[] for _ in hosts]
        for (k, w), face in sorted(self.walk_face.items(), key=lambda i: (i[1], i[0])):
            if w == self.outer[k] and not self.walks[k][w]:
                isolated[face].append(self.components[k][0])
            else:
                walks[face].append(self.walks[k][w])
        for face, host in enumerate(hosts):
            if host is not None:
                enclosing = self.walks[host[0]][host[1]]
                walks[face].remove(enclosing)
                walks[face].insert(0, enclosing)
        return tuple(
            FaceRecord(tuple(walks[i]), tuple(isolated[i]), hosts[i]) for i in range(len(hosts))
        )

    @cached_property
    def dart_face(self) -> tuple[int, ...]:
        result = [0] * (2 * len(self.edges))
        for (k, w), face in self.walk_face.items():
            for d in self.walks[k][w]:
                result[d] = face
        return tuple(result)

    def vertex_face(self, vertex: int) -> int:
        """Face containing an isolated vertex, or the face of its first corner otherwise."""

        if self.rotation[vertex]:
            return self.dart_face[self.rotation[vertex][0]]
        k = self.component_of[vertex]
        return self.walk_face[(k, self.outer[k])]


def trace_faces(embedding: PlaneEmbedding) -> list[FaceRecord]:
    return list(embedding.faces)


def euler_check(embedding: PlaneEmbedding) -> bool:
    """Check v - e + f = 2 for every component, counting the component's own walks."""

    edge_count = [0] * len(embedding.components)
    for u, _ in embedding.edges:
        edge_count[embedding.component_of[u]] += 1
    return all(
        len(members) - edge_count[k] + len(embedding.walks[k]) == 2
        for k, members in enumerate(embedding.components)
    )


def _arrange(
    base: PlaneEmbedding,
    walk_region: Callable[[Walk], int],
    vertex_region: Callable[[int], int],
    root: int,
) -> tuple[PlaneEmbedding, dict[int, int]]:
    """
    Derive nesting and outer walks of `base` from a region assignment.

    Every walk (and every isolated vertex) is assigned a region key. The regions and the
    components form a tree that is traversed from the root region.
    """

    entries: dict[int, list[tuple[int, int]]] = {}
    for k, walks in enumerate(base.walks):
        if walks == ((),):
            entries.setdefault(vertex_region(base.components[k][0]), []).append((k, 0))
            continue
        for w, walk in enumerate(walks):
            entries.setdefault(walk_region(walk), []).append((k, w))

    outer = [-1] * len(base.walks)
    nesting: list[Host] = [None] * len(base.walks)
    owner: dict[int, Host] = {root: None}
    queue = deque([root])
    while queue:
        key = queue.popleft()
        for k, w in entries.get(key, []):
            if owner[key] == (k, w):
                continue
            if outer[k] != -1:
                raise common.StructuralError(f"Component {k} reached twice")
            outer[k] = w
            nesting[k] = owner[key]
            for other, walk in enumerate(base.walks[k]):
                if other == w:
                    continue
                region = walk_region(walk)
                if region in owner:
                    raise common.StructuralError(f"Region {region} enclosed twice")
                owner[region] = (k, other)
                queue.append(region)
    if -1 in outer:
        raise common.StructuralError(f"Component {outer.index(-1)} not reachable")

    result = dataclasses.replace(base, nesting=tuple(nesting), outer=tuple(outer))
    return result, {
        key: 0 if host is None else result.walk_face[host] for key, host in owner.items()
    }


@dataclass(frozen=True)
class SubEmbedding:
    embedding: PlaneEmbedding
    vertex_map: dict[int, int]
    edge_map: dict[int, int]
    residue: dict[int, int]


def sub_embedding_with_residue(
    embedding: PlaneEmbedding,
    keep: Iterable[int],
    keep_edges: Optional[Iterable[int]] = None,
) -> SubEmbedding:
    """
    Restrict an embedding to a vertex set (and optionally an edge subset).

    Arguments:
    ---------
    embedding: Source embedding.
    keep: Vertices to keep; they are re-indexed in ascending order.
    keep_edges: If given, only these edges (among those with both ends kept) survive.

    The residue maps every deleted vertex to the face of the result that contains it.
    """

    kept = sorted(set(keep))
    vertex_map = {v: i for i, v in enumerate(kept)}
    allowed = None if keep_edges is None else set(keep_edges)
    uf = UnionFind(range(len(embedding.faces)))
    edge_map: dict[int, int] = {}
    edges: list[Edge] = []
    for i, (u, v) in enumerate(embedding.edges):
        if u in vertex_map and v in vertex_map and (allowed is None or i in allowed):
            edge_map[i] = len(edges)
            edges.append((vertex_map[u], vertex_map[v]))
        else:
            uf.union(embedding.dart_face[2 * i], embedding.dart_face[2 * i + 1])

    origin: dict[int, int] = {}
    for old, new in edge_map.items():
        origin[2 * new] = 2 * old
        origin[2 * new + 1] = 2 * old + 1
    rotation = tuple(
        tuple(
            2 * edge_map[d >> 1] + (d & 1) for d in embedding.rotation[v] if d >> 1 in edge_map
        )
        for v in kept
    )
    base = PlaneEmbedding(
        len(kept),
        tuple(edges),
        rotation,
        tuple(embedding.labels[v] for v in kept),
    )

    def vertex_region(vertex: int) -> int:
        return uf[embedding.vertex_face(vertex)]

    result, region_face = _arrange(
        base,
        lambda walk: uf[embedding.dart_face[origin[walk[0]]]],
        lambda vertex: vertex_region(kept[vertex]),
        uf[0],
    )
    residue = {
        v: region_face[vertex_region(v)]
        for v in range(embedding.vertex_count)
        if v not in vertex_map
    }
    return SubEmbedding(result, vertex_map, edge_map, residue)


def with_outer_face(embedding: PlaneEmbedding, face: int) -> PlaneEmbedding:
    """Re-root the nesting forest so that `face` becomes the unbounded region."""

    if not 0 <= face < len(embedding.faces):
        raise common.ArgumentError(f"Face {face} out of range")
    base = PlaneEmbedding(
        embedding.vertex_count,
        embedding.edges,
        embedding.rotation,
        embedding.labels,
    )
    result, _ = _arrange(
        base,
        lambda walk: embedding.dart_face[walk[0]],
        embedding.vertex_face,
        face,
    )
    return result


def _walk_through(embedding: PlaneEmbedding, dart: int, inner: set[int]) -> list[int]:
    darts = [dart]
    while embedding.head(dart) in inner:
        first, second = embedding.rotation[embedding.head(dart)]
        dart = second if first == twin(dart) else first
        if edge_of(dart) == edge_of(darts[0]):
            raise common.StructuralError("Cycle of degree-2 vertices cannot be smoothed")
        darts.append(dart)
    return darts


def smooth(embedding: PlaneEmbedding, vertices: Iterable[int]) -> PlaneEmbedding:
    """Remove degree-2 vertices, replacing each path through them by a single edge."""

    inner = set(vertices)
    for v in inner:
        if embedding.degree(v) != 2:
            raise common.StructuralError(f"Vertex {v} of degree {embedding.degree(v)} smoothed")
    kept = [u for u in range(embedding.vertex_count) if u not in inner]
    vertex_map = {v: i for i, v in enumerate(kept)}

    consumed: set[int] = set()
    dart_map: dict[int, int] = {}
    origin: list[int] = []
    edges: list[Edge] = []
    for i in range(len(embedding.edges)):
        if i in consumed:
            continue
        back = _walk_through(embedding, 2 * i + 1, inner)
        chain = _walk_through(embedding, twin(back[-1]), inner)
        consumed.update(edge_of(d) for d in chain)
        tail, head = embedding.tail(chain[0]), embedding.head(chain[-1])
        if tail == head:
            raise common.StructuralError(f"Smoothing creates a loop at vertex {tail}")
        dart_map[chain[0]] = 2 * len(edges)
        dart_map[twin(chain[-1])] = 2 * len(edges) + 1
        origin.extend([chain[0], twin(chain[-1])])
        edges.append((vertex_map[tail], vertex_map[head]))

    base = PlaneEmbedding(
        len(vertex_map),
        tuple(edges),
        tuple(tuple(dart_map[d] for d in embedding.rotation[v]) for v in vertex_map),
        tuple(embedding.labels[v] for v in vertex_map),
    )
    result, _ = _arrange(
        base,
        lambda walk: embedding.dart_face[origin[walk[0]]],
        lambda vertex: embedding.vertex_face(kept[vertex]),
        0,
    )
    return result


def subdivide(embedding: PlaneEmbedding, edges: Iterable[int], label: Color) -> PlaneEmbedding:
    """
    Subdivide edges. Edge i = (u, v) becomes (u, s) and a new edge (s, v) is appended;
    the new vertices s are appended in the order of `edges`.
    """

    new_edges = list(embedding.edges)
    rotation = [list(r) for r in embedding.rotation]
    origin = list(range(2 * len(embedding.edges)))
    for i in edges:
        u, v = embedding.edges[i]
        s = len(rotation)
        j = len(new_edges)
        new_edges[i] = (u, s)
        new_edges.append((s, v))
        origin.extend([2 * i, 2 * i + 1])
        rotation[v][rotation[v].index(2 * i + 1)] = 2 * j + 1
        rotation.append([2 * i + 1, 2 * j])
    base = PlaneEmbedding(
        len(rotation),
        tuple(new_edges),
        tuple(tuple(r) for r in rotation),
        embedding.labels + (label,) * (len(rotation) - embedding.vertex_count),
    )
    result, _ = _arrange(
        base,
        lambda walk: embedding.dart_face[origin[walk[0]]],
        embedding.vertex_face,
        0,
    )
    return result


def insert_edges(
    embedding: PlaneEmbedding,
    insertions: Sequence[tuple[int, int]],
) -> PlaneEmbedding:
    """
    Insert edges into corners of the embedding.

    Each insertion (after, before) adds an edge from tail(after) to tail(before), placed
    clockwise right after `after` and right before `before`. The face on the side of the
    new edge's first dart is a newly cut-off face; everything nested in the split face
    stays with the remaining part.
    """

    old_count = len(embedding.edges)
    edges = list(embedding.edges)
    rotation = [list(r) for r in embedding.rotation]
    old_walk: dict[int, tuple[int, int]] = {}
    for k, walks in enumerate(embedding.walks):
        for w, walk in enumerate(walks):
            for d in walk:
                old_walk[d] = (k, w)
    source_walk: dict[int, tuple[int, int]] = {}
    for after, before in insertions:
        u, v = embedding.tail(after), embedding.tail(before)
        if embedding.component_of[u] != embedding.component_of[v]:
            raise common.StructuralError(f"Inserted edge ({u}, {v}) joins two components")
        d = 2 * len(edges)
        edges.append((u, v))
        rotation[u].insert(rotation[u].index(after) + 1, d)
        rotation[v].insert(rotation[v].index(before), d + 1)
        source_walk[d] = old_walk[twin(after)]
        source_walk[d + 1] = old_walk[before]

    base = PlaneEmbedding(
        embedding.vertex_count,
        tuple(edges),
        tuple(tuple(r) for r in rotation),
        embedding.labels,
    )

    remainder: dict[tuple[int, int], int] = {}
    for k, walks in enumerate(base.walks):
        for w, walk in enumerate(walks):
            if not walk:
                remainder[(k, 0)] = 0
                continue
            olds = [d for d in walk if d < 2 * old_count]
            source = old_walk[olds[0]] if olds else source_walk[walk[0]]
            if any(d >= 2 * old_count and d % 2 == 0 for d in walk):
                continue
            if source in remainder:
                raise common.StructuralError(f"Ambiguous split of walk {source}")
            remainder[source] = w

    try:
        nesting = tuple(
            None if host is None else (host[0], remainder[host]) for host in embedding.nesting
        )
        outer = tuple(remainder[(k, w)] for k, w in enumerate(embedding.outer))
    except KeyError as e:
        raise common.StructuralError(f"Face {e} vanished during insertion") from e
    return dataclasses.replace(base, nesting=nesting, outer=outer)


def relabel_vertices(embedding: PlaneEmbedding, mapping: Sequence[int]) -> PlaneEmbedding:
    """Rename vertex v to mapping[v]; edge and dart ids are unchanged."""

    if sorted(mapping) != list(range(embedding.vertex_count)):
        raise common.ArgumentError("Mapping is not a permutation of the vertices")
    rotation: list[tuple[int, ...]] = [()] * embedding.vertex_count
    labels = [Color.PLAIN] * embedding.vertex_count
    for v, target in enumerate(mapping):
        rotation[target] = embedding.rotation[v]
        labels[target] = embedding.labels[v]
    base = PlaneEmbedding(
        embedding.vertex_count,
        tuple((mapping[u], mapping[v]) for u, v in embedding.edges),
        tuple(rotation),
        tuple(labels),
    )
    inverse = {t: v for v, t in enumerate(mapping)}
    result, _ = _arrange(
        base,
        lambda walk: embedding.dart_face[walk[0]],
        lambda vertex: embedding.vertex_face(inverse[vertex]),
        0,
    )
    return result
