"""Shared builders for the test suite."""
from __future__ import annotations

from twinsurf.bfs import BfsForest, PathPartition, VerticalPath, quotient
from twinsurf.decomposition import SplitTrace, decompose_hexagon, split_region
from twinsurf.disk import disk_from_triangles
from twinsurf.generators import random_wheel_disk
from twinsurf.regions import DiskContext, Region
from twinsurf.treedec import check_decomposition


def wheel_region(k: int, n: int, seed: int):
    """Random disk whose boundary vertices are ``k`` one-vertex paths."""
    faces, parent = random_wheel_disk(k, n, seed)
    disk = disk_from_triangles(faces, parent)
    ctx = DiskContext(disk)
    keys = {}
    for v in disk.boundary:
        keys[v] = ctx.new_key(ctx.add_path([v]))
    return disk, ctx, Region(list(range(len(disk.triangles))), list(disk.boundary), keys)


def disk_graph(disk):
    adj = {v: set() for v in range(disk.num_vertices)}
    for a, b in disk.edge_ends.values():
        adj[a].add(b)
        adj[b].add(a)
    return adj


def disk_forest(disk) -> BfsForest:
    roots = tuple(v for v in range(disk.num_vertices) if disk.parent[v] == -1)
    parent = {v: p for v, p in enumerate(disk.parent) if p != -1}
    return BfsForest(roots, parent, dict(enumerate(disk.layer)))


def check_disk_decomposition(disk, ctx, td):
    """Validate the path partition and the decomposition against the quotient."""
    part = PathPartition(VerticalPath(p, vs) for p, vs in ctx.paths.items())
    adj = disk_graph(disk)
    part.validate(disk_forest(disk), adj.keys())
    check_decomposition(td, quotient(adj, part))
    return part


def hexagon_case(k: int, n: int, seed: int):
    disk, ctx, region = wheel_region(k, n, seed)
    td, top = decompose_hexagon(ctx, region)
    check_disk_decomposition(disk, ctx, td)
    return region, ctx, td, top


def split_case(k: int, n: int, seed: int):
    disk, ctx, region = wheel_region(k, n, seed)
    trace = SplitTrace()
    faces = split_region(ctx, region, trace)
    return faces, trace, ctx
