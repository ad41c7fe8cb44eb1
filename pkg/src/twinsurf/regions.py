"""Regions of a triangulated disk bounded by segments of vertical paths.

A :class:`Region` is a set of triangles of a :class:`~twinsurf.disk.TriDisk`
forming a disk, together with its boundary cycle and a *segment key* for
every boundary vertex.  Keys group the boundary into consecutive segments;
each key maps to a path id in the shared :class:`DiskContext`.  Distinct keys
may map to the same path id (a path that shows up on the boundary more than
once, or a segment split in two).

Splitting a region at an inner face follows, for each face vertex, its chain
of BFS ancestors up to (but not including) the first boundary vertex.  The
chains and the face cut the region into at most three subregions.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .disk import TriDisk
from .errors import DecompositionError, NoTrichromaticFace, UnreachableVertex


class DiskContext:
    """Shared state while decomposing one disk: keys, paths and adjacency."""

    def __init__(self, disk: TriDisk):
        self.disk = disk
        self.key_path: dict[int, int | None] = {}
        self.paths: dict[int, tuple[int, ...]] = {}   # path id -> surface vertices, top to bottom
        self._next_key = 0
        self._next_path = 0
        across: list[list[int]] = []
        for t, es in enumerate(disk.tri_edges):
            row = []
            for e in es:
                ts = disk.edge_tris[e]
                row.append(ts[0] if ts[0] != t else (ts[1] if len(ts) > 1 else -1))
            across.append(row)
        self.across = across

    def new_key(self, pid: int | None = None) -> int:
        k = self._next_key
        self._next_key += 1
        self.key_path[k] = pid
        return k

    def add_path(self, vertices, pid: int | None = None) -> int:
        """Register a path given by surface vertices; returns its id."""
        if pid is None:
            pid = self._next_path
        if pid in self.paths:
            raise DecompositionError(f"path id {pid} registered twice")
        self.paths[pid] = tuple(vertices)
        self._next_path = max(self._next_path, pid + 1)
        return pid


@dataclass
class Region:
    tris: list[int]
    boundary: list[int]
    keys: dict[int, int]

    def segments(self) -> list[tuple[int, list[int]]]:
        """Maximal runs of equal keys around the boundary, in cyclic order."""
        b = self.boundary
        n = len(b)
        start = 0
        for i in range(n):
            if self.keys[b[i - 1]] != self.keys[b[i]]:
                start = i
                break
        runs: list[tuple[int, list[int]]] = []
        for i in range(n):
            v = b[(start + i) % n]
            k = self.keys[v]
            if runs and runs[-1][0] == k:
                runs[-1][1].append(v)
            else:
                runs.append((k, [v]))
        return runs

    def vertices(self, disk: TriDisk) -> set[int]:
        return {v for t in self.tris for v in disk.triangles[t]}

    def interior(self, disk: TriDisk) -> set[int]:
        return self.vertices(disk) - set(self.keys)

    def path_ids(self, ctx: DiskContext) -> set[int]:
        return {ctx.key_path[k] for k in set(self.keys.values())}


def region_from_tris(ctx: DiskContext, tris, key_of) -> Region:
    """Build a region from a triangle set; ``key_of(v)`` labels boundary vertices."""
    disk = ctx.disk
    inside = set(tris)
    nxt: dict[int, int] = {}
    for t in inside:
        vs = disk.triangles[t]
        for i in range(3):
            o = ctx.across[t][i]
            if o == -1 or o not in inside:
                a = vs[i]
                if a in nxt:
                    raise DecompositionError(f"region boundary is pinched at disk vertex {a}")
                nxt[a] = vs[(i + 1) % 3]
    start = min(nxt)
    boundary = [start]
    v = nxt[start]
    while v != start:
        boundary.append(v)
        v = nxt[v]
        if len(boundary) > len(nxt):
            raise DecompositionError("region boundary is not a cycle")
    if len(boundary) != len(nxt):
        raise DecompositionError("region boundary has several cycles")
    keys = {}
    for v in boundary:
        k = key_of(v)
        if k is None:
            raise DecompositionError(f"boundary vertex {v} has no segment key")
        keys[v] = k
    return Region(sorted(inside), boundary, keys)


def reach(ctx: DiskContext, region: Region) -> dict[int, int]:
    """Key of the first boundary vertex on the ancestor chain of each vertex."""
    disk = ctx.disk
    verts = region.vertices(disk)
    out = dict(region.keys)
    for v in verts:
        if v in out:
            continue
        chain = []
        u = v
        while u not in out:
            if u not in verts or u == -1:
                raise UnreachableVertex(f"disk vertex {v} does not reach the region boundary")
            chain.append(u)
            u = disk.parent[u]
            if u == -1:
                raise UnreachableVertex(f"disk vertex {v} reaches a root off the boundary")
        k = out[u]
        for w in chain:
            out[w] = k
    return out


def find_trichromatic_face(ctx: DiskContext, region: Region, color: dict) -> int:
    """First triangle (by id) whose vertices carry three distinct colours."""
    tri = ctx.disk.triangles
    for t in region.tris:
        a, b, c = (color.get(v) for v in tri[t])
        if a is not None and b is not None and c is not None and len({a, b, c}) == 3:
            return t
    raise NoTrichromaticFace("no inner face sees all three colours")


def group_colouring(region: Region, rch: dict[int, int], groups: list[list[int]]) -> dict[int, int]:
    """Colour vertices by which group of segment keys they reach."""
    colour_of_key = {}
    for c, ks in enumerate(groups):
        for k in ks:
            colour_of_key[k] = c
    return {v: colour_of_key[k] for v, k in rch.items() if k in colour_of_key}


@dataclass
class FaceSplit:
    face: int
    corners: tuple[int, int, int]
    chains: list[list[int]]          # bottom (face vertex) to top, disk vertices
    attach: list[int]                # boundary vertex each chain leads to
    chain_keys: list[int | None]
    subregions: list[Region | None]  # across corner i -> corner i+1


def split_at_face(ctx: DiskContext, region: Region, t: int) -> FaceSplit:
    disk = ctx.disk
    corners = disk.triangles[t]
    chains, attach, chain_keys = [], [], []
    blocked: set[frozenset] = set()
    chain_key_of: dict[int, int] = {}
    for x in corners:
        chain = []
        v = x
        while v not in region.keys:
            chain.append(v)
            v = disk.parent[v]
            if v == -1:
                raise UnreachableVertex(f"face vertex {x} has no boundary ancestor")
        chains.append(chain)
        attach.append(v)
        path = chain + [v]
        for a, b in zip(path, path[1:]):
            blocked.add(frozenset((a, b)))
        if chain:
            k = ctx.new_key(None)
            chain_keys.append(k)
            for w in chain:
                if w in chain_key_of:
                    raise DecompositionError("chains of a trichromatic face intersect")
                chain_key_of[w] = k
        else:
            chain_keys.append(None)
    for i in range(3):
        blocked.add(frozenset((corners[i], corners[(i + 1) % 3])))
    inside = set(region.tris)
    owner: dict[int, int] = {t: -1}
    subregions: list[Region | None] = []
    tri = disk.triangles
    for i in range(3):
        s = ctx.across[t][i]
        if s == -1 or s not in inside:
            subregions.append(None)
            continue
        if s in owner:
            raise DecompositionError("subregions of a face split overlap")
        owner[s] = i
        q = deque([s])
        got = [s]
        while q:
            u = q.popleft()
            vs = tri[u]
            for j in range(3):
                w = ctx.across[u][j]
                if w == -1 or w not in inside or w in owner:
                    continue
                if frozenset((vs[j], vs[(j + 1) % 3])) in blocked:
                    continue
                owner[w] = i
                q.append(w)
                got.append(w)

        def key_of(v, _keys=region.keys):
            k = _keys.get(v)
            return k if k is not None else chain_key_of.get(v)

        subregions.append(region_from_tris(ctx, got, key_of))
    if len(owner) != len(inside):
        raise DecompositionError("face split does not cover the region")
    return FaceSplit(t, corners, chains, attach, chain_keys, subregions)


def commit_chain(ctx: DiskContext, split: FaceSplit, i: int) -> int | None:
    """Turn chain ``i`` of a split into a registered vertical path."""
    chain = split.chains[i]
    if not chain:
        return None
    k = split.chain_keys[i]
    if ctx.key_path[k] is not None:
        return ctx.key_path[k]
    pid = ctx.add_path([ctx.disk.orig[v] for v in reversed(chain)])
    ctx.key_path[k] = pid
    return pid


def path_of_vertex(ctx: DiskContext, region: Region, split: FaceSplit, i: int) -> int:
    """Path id holding face corner ``i`` (its chain, or its boundary segment)."""
    if split.chains[i]:
        pid = ctx.key_path[split.chain_keys[i]]
    else:
        pid = ctx.key_path[region.keys[split.corners[i]]]
    if pid is None:
        raise DecompositionError("corner path used before being committed")
    return pid


def split_key(ctx: DiskContext, region: Region) -> Region:
    """Give the longest segment a fresh key for its second half."""
    segs = region.segments()
    key, verts = max(segs, key=lambda s: len(s[1]))
    if len(verts) < 2:
        raise DecompositionError("cannot split a one-vertex segment")
    if len(segs) == 1:
        # one key around the whole cycle: split into thirds
        third = max(1, len(verts) // 3)
        cuts = [verts[third:2 * third], verts[2 * third:]]
    else:
        cuts = [verts[len(verts) // 2:]]
    keys = dict(region.keys)
    for part in cuts:
        nk = ctx.new_key(ctx.key_path[key])
        for v in part:
            keys[v] = nk
    return Region(region.tris, region.boundary, keys)
