"""Instance generators.

Surfaces are described by face lists (vertex cycles) and turned into maps
with :meth:`CombinatorialMap.from_faces`.  Random triangulations start from a
small base triangulation of the requested Euler genus and are grown by
stellar subdivisions mixed with edge flips, both of which preserve the
surface.
"""
from __future__ import annotations

import random

from .embedding import CombinatorialMap

Face = tuple[int, ...]

K6_PROJECTIVE: list[Face] = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
    (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
]

K7_TORUS: list[Face] = (
    [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
    + [(i, (i + 3) % 7, (i + 2) % 7) for i in range(7)]
)

K4_SPHERE: list[Face] = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]


def projective_k6() -> CombinatorialMap:
    return CombinatorialMap.from_faces(6, K6_PROJECTIVE)


def torus_k7() -> CombinatorialMap:
    return CombinatorialMap.from_faces(7, K7_TORUS)


def grid_faces(n: int, triangulated: bool = False) -> list[Face]:
    if n < 3:
        raise ValueError("toroidal grids need n >= 3")

    def vid(i, j):
        return (i % n) * n + (j % n)

    faces: list[Face] = []
    for i in range(n):
        for j in range(n):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            if triangulated:
                faces += [(a, b, c), (a, c, d)]
            else:
                faces.append((a, b, c, d))
    return faces


def toroidal_grid(n: int, triangulated: bool = False) -> CombinatorialMap:
    """The n x n grid on the torus (quadrangular faces unless triangulated)."""
    return CombinatorialMap.from_faces(n * n, grid_faces(n, triangulated))


def connected_sum(a: list[Face], na: int, b: list[Face], nb: int) -> tuple[list[Face], int]:
    """Glue two triangulated surfaces along their first faces.

    Euler genera add.  The second surface is shifted past the first, its
    first face is identified with the first face of ``a`` and both faces are
    removed.
    """
    x1, y1, z1 = a[0]
    x2, y2, z2 = b[0]
    ident = {x2: x1, y2: z1, z2: y1}
    shift = {}
    nxt = na
    for v in range(nb):
        if v in ident:
            shift[v] = ident[v]
        else:
            shift[v] = nxt
            nxt += 1
    faces = list(a[1:]) + [tuple(shift[v] for v in f) for f in b[1:]]
    return faces, nxt


def base_faces(genus: int) -> tuple[list[Face], int]:
    """A small triangulation of the surface with the given Euler genus.

    Even genus gives the orientable surface, odd genus a non-orientable one.
    """
    if genus < 0:
        raise ValueError("genus must be non-negative")
    if genus == 0:
        return list(K4_SPHERE), 4
    if genus % 2:
        faces, n = list(K6_PROJECTIVE), 6
        left = genus - 1
    else:
        faces, n = list(K7_TORUS), 7
        left = genus - 2
    while left:
        faces, n = connected_sum(faces, n, list(K7_TORUS), 7)
        left -= 2
    return faces, n


def grow(faces: list[Face], n: int, target: int, rng: random.Random,
         flips_per_vertex: int = 2) -> tuple[list[Face], int]:
    """Add vertices by stellar subdivision until ``target``, flipping edges in between."""
    faces = [tuple(f) for f in faces]
    sides: dict[frozenset, set[int]] = {}

    def attach(i):
        f = faces[i]
        for k in range(3):
            sides.setdefault(frozenset((f[k], f[(k + 1) % 3])), set()).add(i)

    def detach(i):
        f = faces[i]
        for k in range(3):
            sides[frozenset((f[k], f[(k + 1) % 3]))].discard(i)

    for i in range(len(faces)):
        attach(i)
    while n < target:
        i = rng.randrange(len(faces))
        a, b, c = faces[i]
        detach(i)
        faces[i] = (a, b, n)
        faces += [(b, c, n), (c, a, n)]
        for j in (i, len(faces) - 2, len(faces) - 1):
            attach(j)
        n += 1
        for _ in range(flips_per_vertex):
            _random_flip(faces, sides, rng, attach, detach)
    return faces, n


def _random_flip(faces, sides, rng, attach, detach) -> bool:
    i = rng.randrange(len(faces))
    f = faces[i]
    k = rng.randrange(3)
    a, b = f[k], f[(k + 1) % 3]
    c = f[(k + 2) % 3]
    others = sides[frozenset((a, b))] - {i}
    if len(others) != 1:
        return False
    j = next(iter(others))
    d = next(v for v in faces[j] if v not in (a, b))
    if c == d or sides.get(frozenset((c, d))):
        return False
    detach(i)
    detach(j)
    # keep the orientation of the first face: (a, b, c) becomes (a, d, c) and (d, b, c)
    faces[i] = (a, d, c)
    faces[j] = (d, b, c)
    attach(i)
    attach(j)
    return True


def random_triangulation(genus: int, n: int, seed: int = 0) -> CombinatorialMap:
    """A random triangulation with about ``n`` vertices of the given Euler genus."""
    rng = random.Random(seed)
    faces, m = base_faces(genus)
    faces, m = grow(faces, m, max(n, m), rng)
    return CombinatorialMap.from_faces(m, faces)


def random_disk(n: int, seed: int = 0) -> CombinatorialMap:
    """A random planar triangulation; removing face 0 leaves a triangulated disk."""
    return random_triangulation(0, n, seed)


def random_dense(genus: int, seed: int = 0) -> CombinatorialMap:
    """A random triangulation of Euler genus ``genus`` on few vertices."""
    faces, m = base_faces(genus)
    return random_triangulation(genus, m + 4 * max(genus, 1), seed)


def random_wheel_disk(k: int, n: int, seed: int = 0) -> tuple[list[Face], list[int]]:
    """A random triangulated disk with boundary ``0..k-1`` and ``n`` inner vertices.

    Returns the triangles and BFS parents of a forest rooted at every
    boundary vertex (so each boundary vertex is a one-vertex vertical path).
    """
    if k < 3 or n < 1:
        raise ValueError("need k >= 3 boundary vertices and an inner vertex")
    rng = random.Random(seed)
    faces = [(i, (i + 1) % k, k) for i in range(k)]
    faces, total = grow(faces, k + 1, k + n, rng)
    adj: dict[int, set[int]] = {v: set() for v in range(total)}
    for f in faces:
        for i in range(3):
            a, b = f[i], f[(i + 1) % 3]
            adj[a].add(b)
            adj[b].add(a)
    parent = [-1] * total
    seen = set(range(k))
    frontier = list(range(k))
    while frontier:
        nxt = []
        for v in frontier:
            for u in sorted(adj[v]):
                if u not in seen:
                    seen.add(u)
                    parent[u] = v
                    nxt.append(u)
        frontier = nxt
    return faces, parent
