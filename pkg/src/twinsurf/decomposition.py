"""Decomposing triangulated disks and surfaces into vertical paths.

Three procedures operate on :class:`~twinsurf.regions.Region` objects:

* :func:`decompose_hexagon` handles a region bounded by at most six segments
  and yields a tree-decomposition of width at most seven whose root bag holds
  the boundary paths;
* :func:`split_region` cuts a region bounded by ``k >= 7`` segments into faces
  bounded by at most six, adding at most ``5k - 32`` new paths;
* :func:`add_separating_chords` refines a face until its interior has a
  component touching every bounding path.

:func:`product_structure` chains them for a triangulated surface.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .bfs import BfsForest, PathPartition, VerticalPath, bfs_tree, quotient
from .cutting import CutSystem, WalkSegmentation, boundary_paths, cut_walk, leftover_edges, segment_walk
from .disk import TriDisk, build_disk
from .embedding import CombinatorialMap, euler_genus, is_triangulation, trace_faces, triangulate
from .errors import DecompositionError
from .regions import (DiskContext, FaceSplit, Region, commit_chain, find_trichromatic_face,
                      group_colouring, path_of_vertex, reach, region_from_tris, split_at_face,
                      split_key)
from .treedec import RootedTreeDecomposition, check_decomposition


# ---------------------------------------------------------------- hexagons

def _colour_split(ctx: DiskContext, region: Region, groups_idx: list[list[int]]) -> FaceSplit:
    segs = region.segments()
    groups = [[segs[i][0] for i in g] for g in groups_idx]
    rch = reach(ctx, region)
    colour = group_colouring(region, rch, groups)
    t = find_trichromatic_face(ctx, region, colour)
    split = split_at_face(ctx, region, t)
    # order the corners by colour so chain 0 belongs to group 0 and so on
    order = sorted(range(3), key=lambda i: colour[split.corners[i]])
    return split, order, rch


def decompose_hexagon(ctx: DiskContext, region: Region,
                      td: RootedTreeDecomposition | None = None, parent: int = -1):
    """Width-7 decomposition of a region bounded by at most six segments.

    New chains are registered in ``ctx``; bags are appended to ``td`` (created
    when omitted) below ``parent``.  Returns ``(td, root bag index)``.
    """
    if td is None:
        td = RootedTreeDecomposition()
    disk = ctx.disk
    top = None
    stack = [(region, parent, True)]
    while stack:
        reg, par, force = stack.pop()
        if not reg.interior(disk):
            if force:
                b = td.add(reg.path_ids(ctx), par)
                top = b if top is None else top
            continue
        while len(reg.segments()) < 3:
            reg = split_key(ctx, reg)
        k = len(reg.segments())
        if k <= 5:
            split, order, _ = _colour_split(ctx, reg, [[0], [1], list(range(2, k))])
            chain_ids = {commit_chain(ctx, split, i) for i in range(3)} - {None}
            b = td.add(reg.path_ids(ctx) | chain_ids, par)
            top = b if top is None else top
            for sub in split.subregions:
                if sub is not None:
                    stack.append((sub, b, False))
        elif k == 6:
            split, order, _ = _colour_split(ctx, reg, [[0, 1], [2, 3], [4, 5]])
            for i in range(3):
                commit_chain(ctx, split, i)
            base = reg.path_ids(ctx)
            corner_path = [path_of_vertex(ctx, reg, split, i) for i in range(3)]
            sub_paths = [s.path_ids(ctx) if s is not None else set() for s in split.subregions]
            chosen = None
            for r in range(3):
                u, v, w = r, (r + 1) % 3, (r + 2) % 3
                root_bag = base | {corner_path[u], corner_path[v]}
                x_bag = sub_paths[v] | sub_paths[w] | set(corner_path)
                if len(root_bag) <= 8 and len(x_bag) <= 8:
                    chosen = (u, v, w, root_bag, x_bag)
                    break
            if chosen is None:
                raise DecompositionError("no admissible pair of chains in a hexagon")
            u, v, w, root_bag, x_bag = chosen
            b = td.add(root_bag, par)
            top = b if top is None else top
            x = td.add(x_bag, b)
            if split.subregions[u] is not None:
                stack.append((split.subregions[u], b, False))
            for i in (v, w):
                if split.subregions[i] is not None:
                    stack.append((split.subregions[i], x, False))
        else:
            raise DecompositionError(f"hexagon step called with {k} segments")
    return td, top


# ---------------------------------------------------------------- many segments

@dataclass
class SplitTrace:
    """What :func:`split_region` did, for inspection and tests."""
    events: list[dict] = field(default_factory=list)
    new_paths: list[int] = field(default_factory=list)


def _segment_index(region: Region, key: int) -> int:
    for i, (k, _) in enumerate(region.segments()):
        if k == key:
            return i
    raise DecompositionError(f"key {key} is not on the region boundary")


def split_region(ctx: DiskContext, region: Region, trace: SplitTrace | None = None) -> list[Region]:
    """Cut a region into faces each bounded by at most six segments."""
    if trace is None:
        trace = SplitTrace()
    k = len(region.segments())
    if k <= 6:
        trace.events.append({"k": k, "case": "small"})
        return [region]
    if k >= 9:
        return _split_general(ctx, region, k, trace)
    return _split_seven_eight(ctx, region, k, trace)


def _commit(ctx, split, idx, trace):
    for i in idx:
        pid = commit_chain(ctx, split, i)
        if pid is not None and pid not in trace.new_paths:
            trace.new_paths.append(pid)


def _split_general(ctx, region, k, trace):
    split, order, rch = _colour_split(ctx, region, [[0, 1, 2], [3, 4, 5], list(range(6, k))])
    a, b, c = (_segment_index(region, rch[split.corners[i]]) for i in order)
    lab, lbc, lca = b - a, c - b, k + a - c
    ev = {"k": k, "case": "general", "a": a + 1, "b": b + 1, "c": c + 1,
          "lengths": (lab, lbc, lca)}
    trace.events.append(ev)
    if (lab, lbc, lca) == (3, 3, 3):
        _commit(ctx, split, range(3), trace)
        faces = [s for s in split.subregions if s is not None]
        for f in faces:
            if len(f.segments()) > 6:
                raise DecompositionError("balanced split left a face with more than six segments")
        ev["faces"] = len(faces)
        return faces
    # pick the first pair with at least four segments between them
    pairs = [(0, 1, lab), (1, 2, lbc), (2, 0, lca)]
    p, q, _ = next(pr for pr in pairs if pr[2] >= 4)
    ci, cj = order[p], order[q]
    _commit(ctx, split, (ci, cj), trace)
    # the subregion across the face edge joining these two corners
    sub_idx = ci if (ci + 1) % 3 == cj else cj
    part = split.subregions[sub_idx]
    if part is None:
        raise DecompositionError("expected a non-empty side")
    rest_tris = sorted(set(region.tris) - set(part.tris))
    chain_key = {}
    for i in (ci, cj):
        for v in split.chains[i]:
            chain_key[v] = split.chain_keys[i]

    def key_of(v):
        kk = region.keys.get(v)
        return kk if kk is not None else chain_key.get(v)

    rest = region_from_tris(ctx, rest_tris, key_of)
    ev["pair"] = ("abc"[p], "abc"[q])
    return split_region(ctx, part, trace) + split_region(ctx, rest, trace)


def _split_seven_eight(ctx, region, k, trace):
    groups = [[0, 1, 2], [3, 4], [5, 6]] if k == 7 else [[0, 1, 2], [3, 4, 5], [6, 7]]
    split, order, rch = _colour_split(ctx, region, groups)
    a, b, c = (_segment_index(region, rch[split.corners[i]]) for i in order)
    ev = {"k": k, "case": "first", "a": a + 1, "b": b + 1, "c": c + 1}
    trace.events.append(ev)
    subs = [s for s in split.subregions if s is not None]
    big = [s for s in subs if len(s.segments()) >= k]
    if not big:
        _commit(ctx, split, range(3), trace)
        return _finish_faces(ctx, subs, k, trace)
    # recolour inside the oversized side and split the whole region again
    ev["case"] = "recolour"
    side = big[0]
    orig_keys = set(region.keys.values())
    side_keys = [kk for kk, _ in side.segments()]
    n = len(side_keys)
    # rotate so the run of original keys is contiguous
    start = next(i for i in range(n) if side_keys[i] in orig_keys and side_keys[i - 1] not in orig_keys)
    run = []
    for i in range(n):
        kk = side_keys[(start + i) % n]
        if kk not in orig_keys:
            break
        run.append(kk)
    groups2 = [[run[0]], run[1:-1], [run[-1]]]
    colour = group_colouring(region, rch, groups2)
    side_colour = {v: colour[v] for v in side.vertices(ctx.disk) if v in colour}
    t = find_trichromatic_face(ctx, side, side_colour)
    split2 = split_at_face(ctx, region, t)
    order2 = sorted(range(3), key=lambda i: colour[split2.corners[i]])
    a2, b2, c2 = (_segment_index(region, rch[split2.corners[i]]) for i in order2)
    ev.update({"a2": a2 + 1, "b2": b2 + 1, "c2": c2 + 1})
    _commit(ctx, split2, range(3), trace)
    subs2 = [s for s in split2.subregions if s is not None]
    return _finish_faces(ctx, subs2, k, trace)


def _finish_faces(ctx, subs, k, trace):
    out = []
    for s in subs:
        m = len(s.segments())
        if m <= 6:
            out.append(s)
        elif m == 7 and k == 8:
            out.extend(split_region(ctx, s, trace))
        else:
            raise DecompositionError(f"a face of a {k}-segment split has {m} segments")
    return out


# ---------------------------------------------------------------- chords

def _interior_components(ctx: DiskContext, region: Region) -> list[set[int]]:
    disk = ctx.disk
    inner = region.interior(disk)
    adj: dict[int, set[int]] = {v: set() for v in inner}
    for t in region.tris:
        vs = disk.triangles[t]
        for i in range(3):
            a, b = vs[i], vs[(i + 1) % 3]
            if a in inner and b in inner:
                adj[a].add(b)
                adj[b].add(a)
    comps, seen = [], set()
    for s in sorted(inner):
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        q = deque([s])
        while q:
            v = q.popleft()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    comp.add(u)
                    q.append(u)
        comps.append(comp)
    return comps


def _touched_paths(ctx: DiskContext, region: Region, comp: set[int]) -> set[int]:
    disk = ctx.disk
    out = set()
    for t in region.tris:
        vs = disk.triangles[t]
        if any(v in comp for v in vs):
            for v in vs:
                if v in region.keys:
                    out.add(ctx.key_path[region.keys[v]])
    return out


def has_spanning_component(ctx: DiskContext, region: Region) -> bool:
    need = region.path_ids(ctx)
    return any(_touched_paths(ctx, region, c) >= need for c in _interior_components(ctx, region))


def add_separating_chords(ctx: DiskContext, face: Region) -> list[Region]:
    """Split a face at chords until each piece has a spanning interior component.

    Pieces without interior vertices are dropped: all their vertices already
    lie on bounding paths.
    """
    if not face.interior(ctx.disk):
        return []
    if has_spanning_component(ctx, face):
        return [face]
    disk = ctx.disk
    inside = set(face.tris)
    chord = set()
    for t in face.tris:
        vs = disk.triangles[t]
        for i in range(3):
            o = ctx.across[t][i]
            a, b = vs[i], vs[(i + 1) % 3]
            if o in inside and a in face.keys and b in face.keys:
                chord.add(frozenset((a, b)))
    # atomic pieces: flood fill without crossing chords
    piece_of: dict[int, int] = {}
    pieces: list[list[int]] = []
    for s in face.tris:
        if s in piece_of:
            continue
        pid = len(pieces)
        piece_of[s] = pid
        got = [s]
        q = deque([s])
        while q:
            u = q.popleft()
            vs = disk.triangles[u]
            for j in range(3):
                w = ctx.across[u][j]
                if w in inside and w not in piece_of and frozenset((vs[j], vs[(j + 1) % 3])) not in chord:
                    piece_of[w] = pid
                    got.append(w)
                    q.append(w)
        pieces.append(got)
    regs = [region_from_tris(ctx, p, face.keys.get) for p in pieces]
    paths = [r.path_ids(ctx) for r in regs]
    nonempty = [bool(r.interior(disk)) for r in regs]
    nbr: list[set[int]] = [set() for _ in pieces]
    for t in face.tris:
        vs = disk.triangles[t]
        for i in range(3):
            o = ctx.across[t][i]
            if o in inside and piece_of[o] != piece_of[t]:
                nbr[piece_of[t]].add(piece_of[o])
    # grow groups around dominant non-empty pieces, largest path sets first
    group = [-1] * len(pieces)
    order = sorted((i for i in range(len(pieces)) if nonempty[i]), key=lambda i: (-len(paths[i]), i))
    groups: list[list[int]] = []
    for d in order:
        if group[d] != -1:
            continue
        gid = len(groups)
        members = [d]
        group[d] = gid
        q = deque([d])
        while q:
            x = q.popleft()
            for y in sorted(nbr[x]):
                if group[y] == -1 and paths[y] <= paths[d]:
                    group[y] = gid
                    members.append(y)
                    q.append(y)
        groups.append(members)
    out = []
    for members in groups:
        tris = [t for i in members for t in pieces[i]]
        out.append(region_from_tris(ctx, tris, face.keys.get))
    return out


# ---------------------------------------------------------------- surfaces

@dataclass
class ProductStructure:
    partition: PathPartition
    decomposition: RootedTreeDecomposition
    genus: int
    root_paths: list[int]
    boundary_paths: list[int]
    segments: int
    faces: int
    chord_faces: int
    triangulation: CombinatorialMap
    tree: BfsForest
    trace: SplitTrace | None = None

    def bounds(self) -> dict[str, int]:
        g = self.genus
        return {
            "root": max(6, 32 * g - 27),
            "children": 6 * max(1, 18 * g - 21),
            "bag": 8,
        }


def _graph(m: CombinatorialMap) -> dict[int, set[int]]:
    return {v: set(nb) for v, nb in enumerate(m.adjacency)}


def product_structure(m: CombinatorialMap, tree: BfsForest | None = None,
                      root: int = 0) -> ProductStructure:
    """Vertical-path partition and rooted tree-decomposition of a surface graph.

    Non-triangulated inputs are triangulated first; the tree is a BFS tree of
    the triangulation (passed in or computed from ``root``).
    """
    info = euler_genus(m)
    tri = m if is_triangulation(m) else triangulate(m)
    graph = _graph(tri)
    faces = trace_faces(tri)
    g = info.euler_genus
    if g == 0:
        first = faces.faces[0]
        outer = [tri.origin[d] for d, _ in first]
        if tree is None:
            tree = bfs_tree(graph, min(outer))
        disk = build_disk(tri, tree, set(), faces, excluded_face=0)
        ctx = DiskContext(disk)
        keys = {}
        bpaths = []
        for v in disk.boundary:
            pid = ctx.add_path([disk.orig[v]])
            bpaths.append(pid)
            keys[v] = ctx.new_key(pid)
        region = Region(list(range(len(disk.triangles))), list(disk.boundary), keys)
        seg_count = len(disk.boundary)
    else:
        if tree is None:
            tree = bfs_tree(graph, root)
        extra = leftover_edges(tri, tree, faces)
        cut = cut_walk(tri, tree, extra, faces)
        t0 = boundary_paths(cut, tree)
        segs = segment_walk(cut, t0)
        disk = cut.disk
        ctx = DiskContext(disk)
        bpaths = []
        for p in t0:
            ctx.add_path(p.vertices, p.id)
            bpaths.append(p.id)
        keys = {}
        for pid, positions in segs.segments:
            kk = ctx.new_key(pid)
            for pos in positions:
                keys[cut.walk[pos]] = kk
        region = Region(list(range(len(disk.triangles))), list(disk.boundary), keys)
        seg_count = len(segs)
        if seg_count > min(2 * g + 2 * len(t0) - 1, 6 * g - 1):
            raise DecompositionError(f"{seg_count} walk segments exceed the bound")
    trace = SplitTrace()
    face_regions = split_region(ctx, region, trace)
    root_ids = sorted(set(bpaths) | set(trace.new_paths))
    td = RootedTreeDecomposition()
    rb = td.add(root_ids)
    chord_faces = 0
    for f in face_regions:
        for piece in add_separating_chords(ctx, f):
            chord_faces += 1
            sub, _ = decompose_hexagon(ctx, piece)
            td.graft(sub, rb)
    partition = PathPartition(VerticalPath(pid, vs) for pid, vs in ctx.paths.items())
    return ProductStructure(partition, td, g, root_ids, bpaths, seg_count,
                            len(face_regions), chord_faces, tri, tree, trace)


def check_product_structure(ps: ProductStructure, strict: bool = True) -> dict[str, int]:
    """Verify the partition, the decomposition axioms and the size bounds."""
    tri, tree = ps.triangulation, ps.tree
    graph = _graph(tri)
    ps.partition.validate(tree, graph.keys())
    q = quotient(graph, ps.partition)
    td = ps.decomposition
    check_decomposition(td, q)
    r = td.root
    children = td.children()[r]
    root_bag = td.bags[r]
    stats = {
        "root": len(root_bag),
        "children": len(children),
        "bag": max((len(b) for i, b in enumerate(td.bags) if i != r), default=0),
        "paths": len(ps.partition),
    }
    bounds = ps.bounds()
    problems = []
    if stats["root"] > bounds["root"]:
        problems.append(f"root bag {stats['root']} > {bounds['root']}")
    if ps.genus > 0 and stats["children"] > bounds["children"]:
        problems.append(f"{stats['children']} root children > {bounds['children']}")
    if stats["bag"] > bounds["bag"]:
        problems.append(f"non-root bag of size {stats['bag']} > 8")
    owner = ps.partition.owner()
    for c in children:
        sub = td.subtree(c)
        in_sub = set().union(*(td.bags[b] for b in sub))
        shared = in_sub & root_bag
        if len(shared) > 6:
            problems.append(f"child subtree sees {len(shared)} root paths")
        own = in_sub - root_bag
        if not own:
            continue
        verts = {v for pid in own for v in ps.partition[pid].vertices}
        # components of the subgraph induced by the subtree's own paths
        seen: set[int] = set()
        ok = False
        for s in verts:
            if s in seen:
                continue
            comp, dq = {s}, deque([s])
            seen.add(s)
            while dq:
                v = dq.popleft()
                for u in graph[v]:
                    if u in verts and u not in seen:
                        seen.add(u)
                        comp.add(u)
                        dq.append(u)
            touched = {owner[u] for v in comp for u in graph[v]} & shared
            if touched == shared:
                ok = True
                break
        if not ok:
            problems.append(f"child {c}: no interior component reaches all its root paths")
    if problems and strict:
        raise DecompositionError("; ".join(problems))
    stats["problems"] = len(problems)
    return stats


def structure_from_parts(m: CombinatorialMap, partition: PathPartition,
                         td: RootedTreeDecomposition, genus: int, root: int) -> ProductStructure:
    """Rebuild a checkable :class:`ProductStructure` from stored parts.

    The BFS tree is reconstructed from the paths themselves: inside a path
    each vertex hangs below its predecessor, and a path top hangs below its
    smallest neighbour one layer up.  Layers are distances from ``root``, so
    every path is checked to descend one layer per step.
    """
    info = euler_genus(m)
    if info.euler_genus != genus:
        raise DecompositionError(f"stored genus {genus}, embedding has genus {info.euler_genus}")
    tri = m if is_triangulation(m) else triangulate(m)
    graph = _graph(tri)
    if root not in graph:
        raise DecompositionError(f"root {root} is not a vertex")
    dist = {root: 0}
    dq = deque([root])
    while dq:
        v = dq.popleft()
        for u in graph[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                dq.append(u)
    parent: dict[int, int] = {}
    for p in partition:
        vs = p.vertices
        for a, b in zip(vs, vs[1:]):
            if b not in graph[a] or dist.get(b) != dist.get(a, -2) + 1:
                raise DecompositionError(f"path {p.id} is not vertical at {a}-{b}")
            parent[b] = a
        top = vs[0]
        if top != root:
            ups = [u for u in graph[top] if dist[u] == dist[top] - 1]
            if not ups:
                raise DecompositionError(f"vertex {top} has no neighbour one layer up")
            parent[top] = min(ups)
    tree = BfsForest((root,), parent, dist)
    root_ids = sorted(td.bags[td.root]) if td.bags else []
    return ProductStructure(partition, td, genus, root_ids, [], 0, 0, 0, tri, tree)
