"""Cutting a triangulated surface of positive genus into a disk.

The cut consists of the subtree ``T0`` of the BFS tree spanned by the root
paths to the endpoints of the ``g`` leftover edges, plus those edges.  The
boundary walk of the resulting disk is covered by at most ``2g`` vertical
paths of ``T0`` and splits into at most ``2g + 2k - 1`` segments, each lying on
a single path.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .bfs import BfsForest, PathPartition, VerticalPath
from .disk import TriDisk, build_disk, tree_edge_ids
from .embedding import CombinatorialMap, FaceSet, euler_genus, trace_faces
from .errors import DecompositionError, GenusZero, NotADisk


@dataclass
class CutSystem:
    extra: list[int]
    t0_vertices: frozenset
    t0_edges: frozenset
    f0: frozenset
    disk: TriDisk
    walk: list[int]          # disk vertices along the boundary, starting at a root copy
    walk_darts: list[int]    # surface dart traversed from walk[i] to walk[i+1]

    @property
    def walk_vertices(self) -> list[int]:
        return [self.disk.orig[w] for w in self.walk]


@dataclass
class WalkSegmentation:
    """Segments as (path id, positions) with positions consecutive along W."""
    segments: list[tuple[int, list[int]]]

    def __len__(self):
        return len(self.segments)

    def positions(self) -> list[int]:
        return [p for _, ps in self.segments for p in ps]


def leftover_edges(m: CombinatorialMap, tree: BfsForest, faces: FaceSet | None = None) -> list[int]:
    """Edges in neither the BFS tree nor a BFS spanning tree of the dual."""
    if faces is None:
        faces = trace_faces(m)
    info = euler_genus(m)
    if info.euler_genus == 0:
        raise GenusZero("the surface is a sphere; nothing to cut")
    tree_edges = set(tree_edge_ids(m, tree).values())
    sides: dict[int, list[int]] = {}
    for fi, walk in enumerate(faces.faces):
        for d, _ in walk:
            sides.setdefault(m.edge[d], []).append(fi)
    nbrs: list[list[tuple[int, int]]] = [[] for _ in faces.faces]
    for e, fs in sides.items():
        if e in tree_edges or len(fs) != 2 or fs[0] == fs[1]:
            continue
        a, b = fs
        nbrs[a].append((b, e))
        nbrs[b].append((a, e))
    dual_tree: set[int] = set()
    seen = {0}
    q = deque([0])
    while q:
        f = q.popleft()
        for g, e in sorted(nbrs[f]):
            if g not in seen:
                seen.add(g)
                dual_tree.add(e)
                q.append(g)
    if len(seen) != len(faces.faces):
        raise DecompositionError("dual graph minus tree edges is disconnected")
    out = sorted(set(range(m.num_edges)) - tree_edges - dual_tree)
    if len(out) != info.euler_genus:
        raise DecompositionError(f"expected {info.euler_genus} leftover edges, got {len(out)}")
    return out


def cut_walk(m: CombinatorialMap, tree: BfsForest, extra: list[int],
             faces: FaceSet | None = None) -> CutSystem:
    if faces is None:
        faces = trace_faces(m)
    tedge = tree_edge_ids(m, tree)
    t0_vertices: set[int] = set()
    t0_edges: set[int] = set()
    for e in extra:
        for v in m.endpoints[e]:
            while v not in t0_vertices:
                t0_vertices.add(v)
                if v not in tree.parent:
                    break
                t0_edges.add(tedge[v])
                v = tree.parent[v]
    if set(extra) & set(tedge.values()):
        raise NotADisk("an extra edge belongs to the BFS tree")
    f0 = t0_edges | set(extra)
    disk = build_disk(m, tree, f0, faces)
    root = tree.roots[0]
    start = min(disk.copies[root])
    b = disk.boundary
    if start not in b:
        raise NotADisk("the root is not on the boundary walk")
    i = b.index(start)
    walk = b[i:] + b[:i]
    # the surface dart of each step
    ends = {}
    for de, (x, y) in disk.edge_ends.items():
        if disk.is_boundary_edge(de):
            ends[(x, y)] = ends[(y, x)] = disk.edge_orig[de]
    darts = []
    for j, w in enumerate(walk):
        e = ends[(w, walk[(j + 1) % len(walk)])]
        if e not in f0:
            raise NotADisk(f"boundary uses non-cut edge {e}")
        darts.append(2 * e if m.origin[2 * e] == disk.orig[w] else 2 * e + 1)
    return CutSystem(list(extra), frozenset(t0_vertices), frozenset(t0_edges),
                     frozenset(f0), disk, walk, darts)


def boundary_paths(cut: CutSystem, tree: BfsForest) -> PathPartition:
    """Split T0 into vertical paths, one per leaf in order along the walk."""
    has_child = {tree.parent[v] for v in cut.t0_vertices if v in tree.parent}
    leaves = [v for v in cut.t0_vertices if v not in has_child]
    first = {}
    for pos, v in enumerate(cut.walk_vertices):
        first.setdefault(v, pos)
    leaves.sort(key=lambda v: first[v])
    covered: set[int] = set()
    out = PathPartition()
    for leaf in leaves:
        chain = []
        v = leaf
        while v not in covered:
            chain.append(v)
            covered.add(v)
            if v not in tree.parent:
                break
            v = tree.parent[v]
        out.add(VerticalPath(len(out), tuple(reversed(chain))))
    if covered != set(cut.t0_vertices):
        raise DecompositionError("boundary paths do not cover T0")
    return out


def segment_walk(cut: CutSystem, paths: PathPartition) -> WalkSegmentation:
    """Maximal monotone runs of W along a single path.

    Consecutive positions belong to the same run when one is the parent of
    the other in the disk forest, both lie on the same path and the run keeps
    going in one direction (up or down).
    """
    owner = paths.owner()
    disk = cut.disk
    walk = cut.walk
    L = len(walk)

    def link(i: int) -> int:
        a, b = walk[i], walk[(i + 1) % L]
        if owner[disk.orig[a]] != owner[disk.orig[b]]:
            return 0
        if disk.parent[b] == a:
            return 1
        if disk.parent[a] == b:
            return -1
        return 0

    links = [link(i) for i in range(L)]
    runs: list[list[int]] = [[0]]
    direction = [0]
    for i in range(L - 1):
        li = links[i]
        if li and (direction[-1] == 0 or direction[-1] == li):
            runs[-1].append(i + 1)
            direction[-1] = li
        else:
            runs.append([i + 1])
            direction.append(0)
    li = links[L - 1]
    if len(runs) > 1 and li:
        d_last, d_first = direction[-1], direction[0]
        if (d_last in (0, li)) and (d_first in (0, li)):
            runs[0] = runs.pop() + runs[0]
            direction.pop()
    segs = [(owner[disk.orig[walk[r[0]]]], r) for r in runs]
    return WalkSegmentation(segs)
