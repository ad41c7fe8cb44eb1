"""Triangulated disks obtained by cutting a triangulated surface open.

Cutting along a set of edges ``F0`` duplicates every vertex incident to a cut
edge once per *wedge*: the stretch of its rotation between two consecutive
cut darts.  Every face of the surface then becomes a triangle on those copies
and every cut edge turns into two boundary edges.  When ``F0`` together with
one excluded face (planar case) leaves a disk, the result is a
near-triangulation whose outer boundary is the walk around ``F0``.

The disk keeps the BFS forest of the surface: a copy whose boundary edges
include the tree edge to its parent points to the copy across that edge, the
other copies become roots.  Disk vertices that are not copies keep their
original parent.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .bfs import BfsForest
from .embedding import CombinatorialMap, FaceSet, trace_faces
from .errors import NotADisk


@dataclass
class TriDisk:
    orig: list[int]                 # disk vertex -> surface vertex
    layer: list[int]
    parent: list[int]               # disk vertex -> disk vertex, -1 for roots
    parent_edge: list[int]          # disk edge to the parent, -1 for roots
    triangles: list[tuple[int, int, int]]
    tri_edges: list[tuple[int, int, int]]   # edge i joins vertex i and i+1
    edge_ends: dict[int, tuple[int, int]]
    edge_tris: dict[int, list[int]]
    edge_orig: dict[int, int]       # disk edge -> surface edge
    boundary: list[int]             # boundary cycle, oriented with the triangles
    copies: dict[int, list[int]] = field(default_factory=dict)  # surface vertex -> disk vertices

    @property
    def num_vertices(self) -> int:
        return len(self.orig)

    def neighbours(self) -> list[set[int]]:
        adj = [set() for _ in range(self.num_vertices)]
        for a, b in self.edge_ends.values():
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def is_boundary_edge(self, e: int) -> bool:
        return len(self.edge_tris[e]) == 1


def tree_edge_ids(m: CombinatorialMap, forest: BfsForest) -> dict[int, int]:
    """Pick, for every non-root vertex, the smallest edge id to its parent."""
    best: dict[frozenset, int] = {}
    for e, (u, v) in enumerate(m.endpoints):
        key = frozenset((u, v))
        if key not in best:
            best[key] = e
    return {v: best[frozenset((v, p))] for v, p in forest.parent.items()}


def build_disk(m: CombinatorialMap, forest: BfsForest, cut: set[int],
               faces: FaceSet | None = None, excluded_face: int | None = None) -> TriDisk:
    if faces is None:
        faces = trace_faces(m)
    if any(len(f) != 3 for f in faces.faces):
        raise NotADisk("surface must be triangulated before cutting")
    parent_edge_of = tree_edge_ids(m, forest)

    # wedge of every dart: the last cut dart at or before it in rotation order
    wedge = [-1] * m.num_darts
    copy_index: dict[tuple[int, int], int] = {}
    orig: list[int] = []
    copies: dict[int, list[int]] = {}
    for v, rot in enumerate(m.rotation):
        cut_pos = [i for i, d in enumerate(rot) if m.edge[d] in cut]
        if not cut_pos:
            copy_index[(v, -1)] = len(orig)
            copies[v] = [len(orig)]
            orig.append(v)
            continue
        n = len(rot)
        start = cut_pos[0]
        current = rot[start]
        for k in range(n):
            d = rot[(start + k) % n]
            if m.edge[d] in cut:
                current = d
                copy_index[(v, d)] = len(orig)
                copies.setdefault(v, []).append(len(orig))
                orig.append(v)
            wedge[d] = current

    def copy_of(d: int) -> int:
        return copy_index[(m.origin[d], wedge[d])]

    triangles: list[tuple[int, int, int]] = []
    tri_edges: list[tuple[int, int, int]] = []
    edge_ends: dict[int, tuple[int, int]] = {}
    edge_tris: dict[int, list[int]] = {}
    edge_orig: dict[int, int] = {}
    next_id = m.num_edges
    for fi, (walk, corners) in enumerate(zip(faces.faces, faces.corners)):
        if fi == excluded_face:
            continue
        vs = tuple(copy_of(c) for c in corners)
        es = []
        for i, (d, _) in enumerate(walk):
            e = m.edge[d]
            if e in cut:
                de = next_id
                next_id += 1
            else:
                de = e
            es.append(de)
            a, b = vs[i], vs[(i + 1) % 3]
            if de in edge_ends:
                if frozenset(edge_ends[de]) != frozenset((a, b)):
                    raise NotADisk(f"edge {e} is glued inconsistently")
            else:
                edge_ends[de] = (a, b)
                edge_orig[de] = e
            edge_tris.setdefault(de, []).append(len(triangles))
        triangles.append(vs)
        tri_edges.append(tuple(es))

    boundary, nxt, bedge = _orient(triangles, tri_edges, edge_tris)
    V = len(orig)
    if V - len(edge_ends) + len(triangles) != 1:
        raise NotADisk(f"Euler characteristic {V - len(edge_ends) + len(triangles)} != 1")

    # forest on the disk
    layer = [forest.layer[v] for v in orig]
    parent = [-1] * V
    parent_edge = [-1] * V
    for v, p in forest.parent.items():
        e = parent_edge_of[v]
        if e in cut:
            continue
        d = 2 * e if m.origin[2 * e] == v else 2 * e + 1
        dv, dp = copy_of(d), copy_of(d ^ 1)
        parent[dv] = dp
        parent_edge[dv] = e
    if cut:
        prev = {b: a for a, b in nxt.items()}
        for a in boundary:
            for de in (bedge[a], bedge[prev[a]]):
                x, y = edge_ends[de]
                other = y if x == a else x
                va = orig[a]
                if parent[a] == -1 and forest.parent.get(va) is not None \
                        and edge_orig[de] == parent_edge_of[va] \
                        and orig[other] == forest.parent[va]:
                    parent[a] = other
                    parent_edge[a] = de
    return TriDisk(orig, layer, parent, parent_edge, triangles, tri_edges,
                   edge_ends, edge_tris, edge_orig, boundary, copies)



def _orient(triangles, tri_edges, edge_tris):
    """Orient triangles coherently in place and trace the boundary cycle."""
    # orient triangles coherently
    T = len(triangles)
    oriented = [False] * T
    for s in range(T):
        if oriented[s]:
            continue
        oriented[s] = True
        q = deque([s])
        while q:
            t = q.popleft()
            vs, es = triangles[t], tri_edges[t]
            for i in range(3):
                e = es[i]
                a, b = vs[i], vs[(i + 1) % 3]
                for t2 in edge_tris[e]:
                    if t2 == t or oriented[t2]:
                        continue
                    v2, e2 = triangles[t2], tri_edges[t2]
                    j = e2.index(e)
                    if (v2[j], v2[(j + 1) % 3]) == (a, b):
                        # same direction: flip t2
                        v2 = (v2[0], v2[2], v2[1])
                        e2 = (e2[2], e2[1], e2[0])
                        triangles[t2], tri_edges[t2] = v2, e2
                    oriented[t2] = True
                    q.append(t2)
    for e, ts in edge_tris.items():
        if len(ts) == 2:
            t1, t2 = ts
            i, j = tri_edges[t1].index(e), tri_edges[t2].index(e)
            d1 = (triangles[t1][i], triangles[t1][(i + 1) % 3])
            d2 = (triangles[t2][j], triangles[t2][(j + 1) % 3])
            if d1 == d2:
                raise NotADisk("cut surface is not orientable")
        elif len(ts) != 1:
            raise NotADisk(f"disk edge {e} lies on {len(ts)} triangles")

    nxt: dict[int, int] = {}
    bedge: dict[int, int] = {}
    for t, (vs, es) in enumerate(zip(triangles, tri_edges)):
        for i in range(3):
            if len(edge_tris[es[i]]) == 1:
                a = vs[i]
                if a in nxt:
                    raise NotADisk(f"boundary touches disk vertex {a} twice")
                nxt[a] = vs[(i + 1) % 3]
                bedge[a] = es[i]
    if not nxt:
        raise NotADisk("no boundary")
    start = min(nxt)
    boundary = [start]
    v = nxt[start]
    while v != start:
        boundary.append(v)
        if len(boundary) > len(nxt):
            raise NotADisk("boundary is not a cycle")
        v = nxt[v]
    if len(boundary) != len(nxt):
        raise NotADisk("boundary consists of several cycles")
    return boundary, nxt, bedge



def disk_from_triangles(triangles, parent, layer=None) -> TriDisk:
    """A disk given directly by vertex triples (vertices ``0..n-1``).

    ``parent`` maps each vertex to its forest parent (``-1`` for roots); layers
    default to depths in that forest.
    """
    n = len(parent)
    edge_ids: dict[frozenset, int] = {}
    tri_edges = []
    edge_ends: dict[int, tuple[int, int]] = {}
    edge_tris: dict[int, list[int]] = {}
    for t, vs in enumerate(triangles):
        es = []
        for i in range(3):
            a, b = vs[i], vs[(i + 1) % 3]
            key = frozenset((a, b))
            if key not in edge_ids:
                edge_ids[key] = len(edge_ids)
                edge_ends[edge_ids[key]] = (a, b)
            e = edge_ids[key]
            es.append(e)
            edge_tris.setdefault(e, []).append(t)
        tri_edges.append(tuple(es))
    triangles = [tuple(t) for t in triangles]
    boundary, _, _ = _orient(triangles, tri_edges, edge_tris)
    if n - len(edge_ends) + len(triangles) != 1:
        raise NotADisk("triangles do not form a disk")
    if layer is None:
        layer = [0] * n
        for v in range(n):
            chain = [v]
            while parent[chain[-1]] != -1:
                chain.append(parent[chain[-1]])
                if len(chain) > n:
                    raise NotADisk("parent pointers contain a cycle")
            layer[v] = len(chain) - 1
    parent_edge = [edge_ids[frozenset((v, p))] if p != -1 else -1 for v, p in enumerate(parent)]
    return TriDisk(list(range(n)), list(layer), list(parent), parent_edge, triangles,
                   tri_edges, edge_ends, edge_tris, {e: e for e in edge_ends}, boundary,
                   {v: [v] for v in range(n)})
