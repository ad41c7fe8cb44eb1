"""BFS forests, layerings, vertical paths and quotients over path partitions.

Graphs here are plain adjacency mappings ``{vertex: iterable of neighbours}``
over integer vertices; parallel edges do not matter for any of these
operations.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NotALayering, NotAPartition, UnknownRoot

Graph = Mapping[int, Iterable[int]]


@dataclass(frozen=True)
class BfsForest:
    roots: tuple[int, ...]
    parent: Mapping[int, int]
    layer: Mapping[int, int]

    @property
    def vertices(self):
        return self.layer.keys()

    def validate(self) -> None:
        """Check the forest shape and the parent/layer relation."""
        roots = set(self.roots)
        for v, lay in self.layer.items():
            if lay < 0:
                raise NotALayering(f"vertex {v} has negative layer")
            p = self.parent.get(v)
            if p is None:
                if v not in roots:
                    raise NotALayering(f"vertex {v} has no parent but is not a root")
            else:
                if v in roots:
                    raise NotALayering(f"root {v} has a parent")
                if p not in self.layer:
                    raise NotALayering(f"parent {p} of {v} is not in the forest")
                if self.layer[p] != lay - 1:
                    raise NotALayering(f"layer({v}) != layer(parent) + 1")

    def path_to_root(self, v: int) -> list[int]:
        out = [v]
        while v in self.parent:
            v = self.parent[v]
            out.append(v)
        return out

    def children(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {v: [] for v in self.layer}
        for v, p in self.parent.items():
            ch[p].append(v)
        for lst in ch.values():
            lst.sort()
        return ch


@dataclass(frozen=True)
class Layering:
    layers: tuple[frozenset, ...]

    def index(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}


@dataclass(frozen=True)
class VerticalPath:
    """Vertices listed top (closest to a root) to bottom."""
    id: int
    vertices: tuple[int, ...]

    @property
    def top(self) -> int:
        return self.vertices[0]

    @property
    def bottom(self) -> int:
        return self.vertices[-1]

    def check(self, forest: BfsForest) -> None:
        vs = self.vertices
        if not vs:
            raise NotAPartition(f"path {self.id} is empty")
        for a, b in zip(vs, vs[1:]):
            if forest.parent.get(b) != a:
                raise NotAPartition(f"path {self.id}: {a} is not the parent of {b}")


@dataclass
class PathPartition:
    paths: dict[int, VerticalPath]

    def __init__(self, paths: Iterable[VerticalPath] = ()):
        self.paths = {}
        for p in paths:
            self.add(p)

    def add(self, path: VerticalPath) -> None:
        if path.id in self.paths:
            raise NotAPartition(f"duplicate path id {path.id}")
        self.paths[path.id] = path

    def new(self, vertices: Sequence[int]) -> int:
        pid = max(self.paths, default=-1) + 1
        self.add(VerticalPath(pid, tuple(vertices)))
        return pid

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths.values())

    def __getitem__(self, pid: int) -> VerticalPath:
        return self.paths[pid]

    def owner(self) -> dict[int, int]:
        """Map each covered vertex to the id of its path."""
        out: dict[int, int] = {}
        for p in self.paths.values():
            for v in p.vertices:
                if v in out:
                    raise NotAPartition(f"vertex {v} lies on paths {out[v]} and {p.id}")
                out[v] = p.id
        return out

    def validate(self, forest: BfsForest | None = None, vertices: Iterable[int] | None = None) -> None:
        owner = self.owner()
        if vertices is not None:
            vs = set(vertices)
            if set(owner) != vs:
                missing = sorted(vs - set(owner))[:5]
                extra = sorted(set(owner) - vs)[:5]
                raise NotAPartition(f"partition mismatch: missing {missing} extra {extra}")
        if forest is not None:
            for p in self.paths.values():
                p.check(forest)


@dataclass(frozen=True)
class QuotientGraph:
    vertices: frozenset
    adjacency: Mapping[int, frozenset]

    def edges(self) -> set[frozenset]:
        return {frozenset((a, b)) for a, nb in self.adjacency.items() for b in nb}


def bfs_tree(graph: Graph, root: int) -> BfsForest:
    """Breadth-first spanning tree; neighbours are scanned smallest first."""
    if root not in graph:
        raise UnknownRoot(f"root {root} is not a vertex")
    parent: dict[int, int] = {}
    layer = {root: 0}
    q = deque([root])
    while q:
        v = q.popleft()
        for u in sorted(graph[v]):
            if u not in layer:
                layer[u] = layer[v] + 1
                parent[u] = v
                q.append(u)
    return BfsForest((root,), parent, layer)


def layering_of(forest: BfsForest, graph: Graph | None = None) -> Layering:
    depth = max(forest.layer.values(), default=-1) + 1
    buckets: list[set] = [set() for _ in range(depth)]
    for v, lay in forest.layer.items():
        buckets[lay].add(v)
    if graph is not None:
        for v, nb in graph.items():
            for u in nb:
                if abs(forest.layer[u] - forest.layer[v]) > 1:
                    raise NotALayering(f"edge {v}-{u} spans layers "
                                       f"{forest.layer[v]} and {forest.layer[u]}")
    return Layering(tuple(frozenset(b) for b in buckets))


def restrict_forest(forest: BfsForest, removed: Iterable[int]) -> BfsForest:
    """Drop ``removed``; orphaned vertices become roots and keep their layer."""
    gone = set(removed)
    layer = {v: lay for v, lay in forest.layer.items() if v not in gone}
    parent = {v: p for v, p in forest.parent.items() if v not in gone and p not in gone}
    roots = tuple(sorted(v for v in layer if v not in parent))
    return BfsForest(roots, parent, layer)


def quotient(graph: Graph, partition: PathPartition) -> QuotientGraph:
    owner = partition.owner()
    if set(owner) != set(graph):
        raise NotAPartition("partition does not cover exactly the vertex set")
    adj: dict[int, set] = {pid: set() for pid in partition.paths}
    for v, nb in graph.items():
        a = owner[v]
        for u in nb:
            b = owner[u]
            if a != b:
                adj[a].add(b)
                adj[b].add(a)
    return QuotientGraph(frozenset(adj), {k: frozenset(s) for k, s in adj.items()})


def graph_distances(graph: Graph, source: int) -> dict[int, int]:
    dist = {source: 0}
    q = deque([source])
    while q:
        v = q.popleft()
        for u in graph[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                q.append(u)
    return dist
