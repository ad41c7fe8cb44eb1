"""Graphs embedded on surfaces as signed rotation systems.

A map is stored at the level of darts (half-edges).  Edge ``e`` owns the two
darts ``2*e`` and ``2*e + 1``; ``origin[d]`` is the vertex a dart leaves from
and ``rotation[v]`` lists the darts at ``v`` in cyclic order.  Each edge has
a sign; ``-1`` marks an edge along which the local orientation flips, which is
what lets the same structure describe non-orientable surfaces.

Faces are traced on *flags* ``(dart, eps)``: ``eps`` is the current local
orientation of the walk.  Leaving along dart ``d`` we arrive at ``twin(d)``
with orientation ``eps * sign``, and continue with the rotation successor
(``eps = +1``) or predecessor (``eps = -1``) of the arrival dart.  Every face
is found twice, once per direction; the two copies pass through the same
corners, so faces are deduplicated by corner.  A corner is named by the dart
that precedes it in rotation order, which makes corners and darts correspond
one to one.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (BadRotation, BrokenInvolution, DegenerateFace,
                     Disconnected, LoopEdge)


@dataclass(frozen=True, eq=False)
class CombinatorialMap:
    origin: tuple[int, ...]
    edge: tuple[int, ...]
    twin: tuple[int, ...]
    rotation: tuple[tuple[int, ...], ...]
    sign: tuple[int, ...]
    augmented: frozenset = field(default_factory=frozenset)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rotation_lists(cls, rotations: Sequence[Sequence[tuple[int, int]]],
                            augmented: Iterable[int] = ()) -> "CombinatorialMap":
        """Build a map from per-vertex cyclic lists of ``(edge_id, sign)``.

        Edge ids must be ``0..m-1``; each must occur exactly twice overall.
        The first occurrence (in vertex order) receives dart ``2e``.
        """
        occurrences: dict[int, list[tuple[int, int, int]]] = {}
        for v, rot in enumerate(rotations):
            for pos, (e, s) in enumerate(rot):
                occurrences.setdefault(e, []).append((v, pos, s))
        m = len(occurrences)
        if sorted(occurrences) != list(range(m)):
            raise BadRotation("edge ids must be 0..m-1 without gaps")
        origin = [0] * (2 * m)
        edge = [0] * (2 * m)
        sign = [1] * m
        dart_at: dict[tuple[int, int], int] = {}
        for e, occ in occurrences.items():
            if len(occ) != 2:
                raise BadRotation(f"edge {e} occurs {len(occ)} times, expected 2")
            (v0, p0, s0), (v1, p1, s1) = occ
            if s0 != s1 or s0 not in (1, -1):
                raise BadRotation(f"edge {e} has inconsistent sign")
            sign[e] = s0
            for k, (v, p) in enumerate(((v0, p0), (v1, p1))):
                d = 2 * e + k
                origin[d] = v
                edge[d] = e
                dart_at[(v, p)] = d
        rotation = tuple(tuple(dart_at[(v, p)] for p in range(len(rot)))
                         for v, rot in enumerate(rotations))
        twin = tuple(d ^ 1 for d in range(2 * m))
        return cls(tuple(origin), tuple(edge), twin, rotation, tuple(sign),
                   frozenset(augmented))

    @classmethod
    def from_faces(cls, num_vertices: int, faces: Sequence[Sequence[int]]) -> "CombinatorialMap":
        """Build the map of a surface given by its face boundaries.

        Faces are vertex cycles of a simple graph; every edge must lie on
        exactly two face sides and every vertex link must be one cycle.
        Edge ids are assigned in order of first appearance.  Faces listed
        with coherent orientations yield all-positive signs.
        """
        edge_id: dict[frozenset, int] = {}
        # per vertex: corner list of (edge_in, edge_out, face index)
        corners: list[list[tuple[int, int, int]]] = [[] for _ in range(num_vertices)]
        face_edges = []
        for fi, face in enumerate(faces):
            L = len(face)
            es = []
            for i in range(L):
                key = frozenset((face[i], face[(i + 1) % L]))
                if len(key) != 2:
                    raise LoopEdge(f"face {fi} repeats vertex {face[i]} consecutively")
                if key not in edge_id:
                    edge_id[key] = len(edge_id)
                es.append(edge_id[key])
            face_edges.append(es)
            for i in range(L):
                corners[face[i]].append((es[i - 1], es[i], fi))

        m = len(edge_id)
        rot_edges: list[list[int]] = []
        delta: dict[tuple[int, int], int] = {}  # (vertex, face) -> +1/-1
        for v in range(num_vertices):
            cs = corners[v]
            if not cs:
                raise BadRotation(f"vertex {v} lies on no face")
            by_edge: dict[int, list[int]] = {}
            for ci, (a, b, _) in enumerate(cs):
                by_edge.setdefault(a, []).append(ci)
                by_edge.setdefault(b, []).append(ci)
            # walk the link: leave each corner through its out-edge into the
            # other corner on that edge
            a0, b0, f0 = cs[0]
            delta[(v, f0)] = 1
            order = [a0]
            cur, cur_edge = 0, b0
            visited = 1
            while True:
                nxt = [c for c in by_edge[cur_edge] if c != cur]
                if len(nxt) != 1:
                    raise BadRotation(f"edge {cur_edge} at vertex {v} is not on exactly two corners")
                cur = nxt[0]
                if cur == 0:
                    break
                visited += 1
                if visited > len(cs):
                    raise BadRotation(f"link of vertex {v} is not a single cycle")
                order.append(cur_edge)
                a, b, fi = cs[cur]
                if a == cur_edge:
                    delta[(v, fi)] = 1
                    cur_edge = b
                else:
                    delta[(v, fi)] = -1
                    cur_edge = a
            if visited != len(cs) or cur_edge != a0:
                raise BadRotation(f"link of vertex {v} is not a single cycle")
            rot_edges.append(order)

        sign = [0] * m
        for fi, face in enumerate(faces):
            L = len(face)
            for i in range(L):
                e = face_edges[fi][i]
                s = delta[(face[i], fi)] * delta[(face[(i + 1) % L], fi)]
                if sign[e] == 0:
                    sign[e] = s
                elif sign[e] != s:
                    # the edge's other side must agree; a mismatch means the
                    # face list does not describe a surface
                    raise BadRotation(f"edge {e} gets inconsistent signs")
        rotations = [[(e, sign[e]) for e in rot_edges[v]] for v in range(num_vertices)]
        return cls.from_rotation_lists(rotations)

    # -- basic accessors --------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.rotation)

    @property
    def num_edges(self) -> int:
        return len(self.sign)

    @property
    def num_darts(self) -> int:
        return len(self.origin)

    @cached_property
    def endpoints(self) -> tuple[tuple[int, int], ...]:
        return tuple((self.origin[2 * e], self.origin[2 * e + 1]) for e in range(self.num_edges))

    @cached_property
    def _succ_pred(self):
        succ = [0] * self.num_darts
        pred = [0] * self.num_darts
        for rot in self.rotation:
            n = len(rot)
            for i, d in enumerate(rot):
                succ[d] = rot[(i + 1) % n]
                pred[d] = rot[i - 1]
        return succ, pred

    @property
    def succ(self) -> list[int]:
        return self._succ_pred[0]

    @property
    def pred(self) -> list[int]:
        return self._succ_pred[1]

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        """Simple-graph adjacency (parallel edges collapse)."""
        adj = [set() for _ in range(self.num_vertices)]
        for u, v in self.endpoints:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def edge_set(self) -> set[frozenset]:
        return {frozenset(uv) for uv in self.endpoints}

    def relabel(self, vertex_perm: Sequence[int], edge_perm: Sequence[int]) -> "CombinatorialMap":
        """Return an isomorphic copy with vertex ``v`` renamed ``vertex_perm[v]``."""
        n = self.num_vertices
        rots: list = [None] * n
        for v in range(n):
            rots[vertex_perm[v]] = [(edge_perm[self.edge[d]], self.sign[self.edge[d]])
                                    for d in self.rotation[v]]
        return CombinatorialMap.from_rotation_lists(
            rots, augmented=[edge_perm[e] for e in self.augmented])


@dataclass(frozen=True)
class FaceSet:
    """Face walks of a map.

    ``faces[i]`` is the list of flags ``(dart, eps)`` along which face ``i``
    leaves each of its corners; ``corners[i]`` lists the matching corner
    darts.
    """
    faces: tuple[tuple[tuple[int, int], ...], ...]
    corners: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.faces)

    def lengths(self) -> list[int]:
        return [len(f) for f in self.faces]


@dataclass(frozen=True)
class SurfaceInfo:
    vertices: int
    edges: int
    faces: int
    euler_characteristic: int
    euler_genus: int
    orientable: bool

    def describe(self) -> str:
        kind = "orientable" if self.orientable else "non-orientable"
        return f"genus {self.euler_genus} {kind}"


# -- validation -----------------------------------------------------------

def validate_map(m: CombinatorialMap) -> None:
    nd = m.num_darts
    if len(m.edge) != nd or len(m.twin) != nd or nd != 2 * m.num_edges:
        raise BrokenInvolution("dart arrays have inconsistent lengths")
    for d in range(nd):
        t = m.twin[d]
        if not 0 <= t < nd or t == d:
            raise BrokenInvolution(f"twin of dart {d} is {t}")
        if m.twin[t] != d:
            raise BrokenInvolution(f"twin is not an involution at dart {d}")
        if m.edge[t] != m.edge[d]:
            raise BrokenInvolution(f"dart {d} and its twin {t} lie on different edges")
    seen = [False] * nd
    for v, rot in enumerate(m.rotation):
        for d in rot:
            if not 0 <= d < nd:
                raise BadRotation(f"rotation of vertex {v} names unknown dart {d}")
            if seen[d]:
                raise BadRotation(f"dart {d} appears twice in rotations")
            if m.origin[d] != v:
                raise BadRotation(f"dart {d} listed at vertex {v} but originates at {m.origin[d]}")
            seen[d] = True
    for d in range(nd):
        if not seen[d]:
            raise BadRotation(f"dart {d} missing from the rotation at vertex {m.origin[d]}")
    for e, (u, v) in enumerate(m.endpoints):
        if u == v:
            raise LoopEdge(f"edge {e} is a loop at vertex {u}")
        if m.sign[e] not in (1, -1):
            raise BadRotation(f"edge {e} has sign {m.sign[e]}")


# -- faces ----------------------------------------------------------------

def _step(m: CombinatorialMap, dart: int, eps: int) -> tuple[int, int]:
    arrive = m.twin[dart]
    eps2 = eps * m.sign[m.edge[dart]]
    nxt = m.succ[arrive] if eps2 > 0 else m.pred[arrive]
    return nxt, eps2


def corner_of(m: CombinatorialMap, arrive: int, leave: int, eps: int) -> int:
    """Corner dart of the wedge entered via ``arrive`` and left via ``leave``."""
    return arrive if eps > 0 else leave


def trace_faces(m: CombinatorialMap) -> FaceSet:
    validate_map(m)
    nd = m.num_darts
    covered = [False] * nd
    faces = []
    corners = []
    for start in range(nd):
        if covered[start]:
            continue
        # leaving through succ(start) with orientation +1 passes the corner
        # named by `start` first
        flag = (m.succ[start], 1)
        walk = []
        cs = []
        f = flag
        while True:
            d, eps = f
            walk.append(f)
            nxt = _step(m, d, eps)
            arrive = m.twin[d]
            cs.append(corner_of(m, arrive, nxt[0], nxt[1]))
            f = nxt
            if f == flag:
                break
        # rotate so the walk starts by leaving the corner `start`
        # (cs[i] is the corner at the end of step i, i.e. before step i+1)
        k = cs.index(start)
        walk = walk[k + 1:] + walk[:k + 1]
        cs = cs[k:] + cs[:k]
        for c in cs:
            if covered[c]:
                raise BadRotation("face tracing visited a corner twice")
            covered[c] = True
        faces.append(tuple(walk))
        corners.append(tuple(cs))
    return FaceSet(tuple(faces), tuple(corners))


def face_vertices(m: CombinatorialMap, walk: Sequence[tuple[int, int]]) -> list[int]:
    return [m.origin[d] for d, _ in walk]


def is_connected(m: CombinatorialMap) -> bool:
    n = m.num_vertices
    if n == 0:
        return True
    seen = {0}
    q = deque([0])
    adj = m.adjacency
    while q:
        v = q.popleft()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                q.append(u)
    return len(seen) == n


def orientation_signs(m: CombinatorialMap) -> list[int] | None:
    """Per-vertex flips making every sign positive, or ``None`` if impossible."""
    n = m.num_vertices
    flip = [0] * n
    incident: list[list[int]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(m.endpoints):
        incident[u].append(e)
        incident[v].append(e)
    for s in range(n):
        if flip[s]:
            continue
        flip[s] = 1
        q = deque([s])
        while q:
            v = q.popleft()
            for e in incident[v]:
                a, b = m.endpoints[e]
                u = b if a == v else a
                want = flip[v] * m.sign[e]
                if flip[u] == 0:
                    flip[u] = want
                    q.append(u)
                elif flip[u] != want:
                    return None
    return flip


def euler_genus(m: CombinatorialMap) -> SurfaceInfo:
    validate_map(m)
    if not is_connected(m):
        raise Disconnected("map is disconnected; decompose it per component first")
    faces = trace_faces(m)
    V, E, F = m.num_vertices, m.num_edges, len(faces)
    chi = V - E + F
    return SurfaceInfo(V, E, F, chi, 2 - chi, orientation_signs(m) is not None)


def is_triangulation(m: CombinatorialMap) -> bool:
    return all(len(f) == 3 for f in trace_faces(m).faces)


# -- triangulation --------------------------------------------------------

def triangulate(m: CombinatorialMap) -> CombinatorialMap:
    """Add diagonals until every face is a triangle.

    Ears are cut between corners two steps apart with distinct vertices,
    preferring pairs that are not adjacent yet so no parallel edge appears
    unless unavoidable.  New edges are listed in ``augmented``.
    """
    validate_map(m)
    if not is_connected(m):
        raise Disconnected("map is disconnected; decompose it per component first")
    faces = trace_faces(m)
    if all(len(f) == 3 for f in faces.faces):
        return m
    for f in faces.faces:
        if len(f) < 3:
            raise DegenerateFace(f"face of length {len(f)} cannot be triangulated")

    succ = list(m.succ)
    pred = list(m.pred)
    origin = list(m.origin)
    sign = list(m.sign)
    twin_of = lambda d: d ^ 1  # noqa: E731
    assert all(m.twin[d] == d ^ 1 for d in range(m.num_darts))
    pairs = {frozenset(p) for p in m.endpoints}
    augmented = set(m.augmented)

    def insert_after(x: int, new: int) -> None:
        y = succ[x]
        succ[x] = new
        pred[new] = x
        succ[new] = y
        pred[y] = new

    for walk in faces.faces:
        if len(walk) == 3:
            continue
        # corner list: (vertex, arrive, leave, eps)
        cs = []
        L = len(walk)
        for i in range(L):
            d_prev, _ = walk[i - 1]
            d, eps = walk[i]
            cs.append((origin[d], twin_of(d_prev), d, eps))
        while len(cs) > 3:
            L = len(cs)
            choice = None
            for i in range(L):
                u, w = cs[i][0], cs[(i + 2) % L][0]
                if u != w and frozenset((u, w)) not in pairs:
                    choice = i
                    break
            if choice is None:
                for i in range(L):
                    if cs[i][0] != cs[(i + 2) % L][0]:
                        choice = i
                        break
            if choice is None:
                raise DegenerateFace("face admits no loop-free diagonal: "
                                     + " ".join(str(c[0]) for c in cs))
            i = choice
            j = (i + 2) % L
            u, u_in, u_out, eu = cs[i]
            w, w_in, w_out, ew = cs[j]
            e = len(sign)
            a, b = 2 * e, 2 * e + 1
            sign.append(eu * ew)
            origin.extend([u, w])
            succ.extend([0, 0])
            pred.extend([0, 0])
            insert_after(u_in if eu > 0 else u_out, a)
            insert_after(w_in if ew > 0 else w_out, b)
            pairs.add(frozenset((u, w)))
            augmented.add(e)
            new_cs = []
            for k in range(L):
                if k == (i + 1) % L:
                    continue
                if k == i:
                    new_cs.append((u, u_in, a, eu))
                elif k == j:
                    new_cs.append((w, b, w_out, ew))
                else:
                    new_cs.append(cs[k])
            # keep cyclic order starting after the removed corner
            cs = new_cs

    rotations = []
    for v in range(m.num_vertices):
        rot = m.rotation[v]
        if not rot:
            rotations.append([])
            continue
        start = rot[0]
        seq = [start]
        d = succ[start]
        while d != start:
            seq.append(d)
            d = succ[d]
        rotations.append([(dd >> 1, sign[dd >> 1]) for dd in seq])
    out = CombinatorialMap.from_rotation_lists(rotations, augmented=augmented)
    # darts keep their ids because first occurrence order is preserved only
    # for original edges; re-derive cleanly instead of relying on it
    if not is_triangulation(out):
        raise DegenerateFace("triangulation failed to produce triangular faces")
    return out
