"""Contraction sequences for surface graphs built from a product structure.

The plan contracts the root paths ``P_1..P_k`` and the vertex sets ``V_i`` of
the subtrees below the root into a small graph ``H0`` and groups its
vertices by degree into ``A`` groups (root paths) and ``B`` groups (subtrees)
with threshold ``s = 3 sqrt(47 g)``.  Contractions then run in three phases:

I.   per subtree, collapse ``V_i`` layer by layer following an elimination
     order of its paths, merging vertices with equal shadows, and fold the
     result into the accumulator of its ``B`` group;
II.  merge the root paths of each ``A`` group layer by layer, top to bottom;
III. collapse every layer to one vertex and then chain the layers.

No contraction ever joins vertices of different layers before Phase III.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .bfs import BfsForest
from .decomposition import ProductStructure, product_structure
from .embedding import CombinatorialMap
from .errors import NotA7Tree, ScheduleError
from .trigraph import ContractionSequence, TrigraphState

Graph = Mapping[int, Iterable[int]]


def threshold(g: int) -> float:
    return 3 * math.sqrt(47 * max(g, 1))


def overall_bound(g: int) -> float:
    return 6 * max(threshold(g) + 1, 2 ** 24)


def group_by_degree(items: list[int], degree: Mapping[int, int], s: float,
                    singleton_above: bool = False) -> list[list[int]]:
    """Consecutive grouping: a group closes once its degree sum reaches ``s``.

    With ``singleton_above`` every item of degree larger than ``s`` forms its
    own group.
    """
    groups: list[list[int]] = []
    cur: list[int] = []
    total = 0
    for x in items:
        if singleton_above and degree[x] > s:
            groups.append([x])
            continue
        cur.append(x)
        total += degree[x]
        if total >= s:
            groups.append(cur)
            cur, total = [], 0
    if cur:
        groups.append(cur)
    return groups


@dataclass
class SchedulePlan:
    genus: int
    s: float
    root_paths: list[int]
    subtrees: list[int]                      # child bags of the root
    subtree_vertices: list[set[int]]         # V_i
    subtree_root_paths: list[list[int]]      # root paths seen by each subtree
    deg_a: dict[int, int]
    deg_b: list[int]
    h0_edges: int
    groups_a: list[list[int]]
    groups_b: list[list[int]]
    layer: Mapping[int, int]
    path_vertices: dict[int, tuple[int, ...]]

    @property
    def k(self) -> int:
        return len(self.root_paths)

    @property
    def ell(self) -> int:
        return len(self.subtrees)

    @property
    def k_prime(self) -> int:
        return len(self.groups_a)

    @property
    def ell_prime(self) -> int:
        return len(self.groups_b)

    def check(self) -> None:
        g = max(self.genus, 1)
        s = self.s
        if self.k > 32 * g:
            raise ScheduleError(f"k = {self.k} exceeds 32g")
        if self.ell > 108 * g:
            raise ScheduleError(f"l = {self.ell} exceeds 108g")
        for i, d in enumerate(self.deg_b):
            if d > 6:
                raise ScheduleError(f"b_{i + 1} has degree {d} > 6")
        for n, grp in enumerate(self.groups_b):
            tot = sum(self.deg_b[i] for i in grp)
            if tot > s + 6 or (n < len(self.groups_b) - 1 and tot < s):
                raise ScheduleError(f"B group {n} has degree sum {tot}")
        for grp in self.groups_a:
            tot = sum(self.deg_a[p] for p in grp)
            if len(grp) > 1 and tot > 2 * s:
                raise ScheduleError(f"A group has degree sum {tot} > 2s")
        if self.k_prime + self.ell_prime > 2 * s + 2:
            raise ScheduleError("H0' has more than 2s + 2 vertices")
        if sum(self.deg_a.values()) + sum(self.deg_b) > 6 * (self.k + self.ell + g):
            raise ScheduleError("degree sum of H0 exceeds 6(k + l + g)")


def build_plan(graph0: Graph, ps: ProductStructure) -> SchedulePlan:
    td = ps.decomposition
    root = td.root
    root_bag = td.bags[root]
    root_paths = sorted(root_bag)
    children = td.children()[root]
    owner = ps.partition.owner()
    subtree_vertices, subtree_root_paths = [], []
    deg_b = []
    b_nbrs: list[set[int]] = []
    adj_a: dict[int, set[int]] = {p: set() for p in root_paths}
    for c in children:
        bags = td.subtree(c)
        seen = set().union(*(td.bags[b] for b in bags))
        shared = sorted(seen & root_bag)
        own = seen - root_bag
        verts = {v for pid in own for v in ps.partition[pid].vertices}
        subtree_vertices.append(verts)
        subtree_root_paths.append(shared)
        # the component of V_i touching every shared root path
        comp = _touching_component(graph0, verts, owner, set(shared))
        nb = {owner[u] for v in comp for u in graph0[v] if owner[u] in root_bag}
        b_nbrs.append(nb)
        deg_b.append(len(nb))
    for v, nbrs in graph0.items():
        a = owner[v]
        if a not in root_bag:
            continue
        for u in nbrs:
            b = owner[u]
            if b in root_bag and b != a:
                adj_a[a].add(b)
    deg_a = {p: len(adj_a[p]) for p in root_paths}
    for nb in b_nbrs:
        for p in nb:
            deg_a[p] += 1
    h0_edges = sum(len(x) for x in adj_a.values()) // 2 + sum(deg_b)
    s = threshold(ps.genus)
    groups_b = group_by_degree(list(range(len(children))), dict(enumerate(deg_b)), s)
    groups_a = group_by_degree(root_paths, deg_a, s, singleton_above=True)
    return SchedulePlan(ps.genus, s, root_paths, children, subtree_vertices, subtree_root_paths,
                        deg_a, deg_b, h0_edges, groups_a, groups_b, ps.tree.layer,
                        {p.id: p.vertices for p in ps.partition})


def _touching_component(graph0, verts, owner, shared) -> set[int]:
    seen: set[int] = set()
    best: set[int] = set()
    for s0 in sorted(verts):
        if s0 in seen:
            continue
        comp = {s0}
        stack = [s0]
        seen.add(s0)
        while stack:
            v = stack.pop()
            for u in graph0[v]:
                if u in verts and u not in seen:
                    seen.add(u)
                    comp.add(u)
                    stack.append(u)
        touched = {owner[u] for v in comp for u in graph0[v]} & shared
        if touched == shared:
            return comp
        if len(comp) > len(best):
            best = comp
    return best


def elimination_order(td, sub_root: int, first: list[int]) -> list[int]:
    """Order the paths of a subtree: ``first`` (root paths), then by introduction.

    Bags are visited breadth first; each path is placed when its topmost bag
    is reached.  Verifies that every path's earlier neighbours (paths sharing
    a bag) lie in one bag and number at most seven.
    """
    ch = td.children()
    order = list(first)
    placed = set(order)
    intro_bag: dict[int, int] = {p: sub_root for p in first}
    queue = [sub_root]
    qi = 0
    while qi < len(queue):
        b = queue[qi]
        qi += 1
        for p in sorted(td.bags[b] - placed):
            placed.add(p)
            order.append(p)
            intro_bag[p] = b
        queue.extend(ch[b])
    pos = {p: i for i, p in enumerate(order)}
    earlier: dict[int, set[int]] = defaultdict(set)
    for b in queue:
        bag = td.bags[b]
        for p in bag:
            for q in bag:
                if pos[q] < pos[p]:
                    earlier[p].add(q)
    for p in order[len(first):]:
        back = earlier[p]
        if len(back) > 7 or not back <= td.bags[intro_bag[p]]:
            raise NotA7Tree(f"path {p} has back-neighbourhood {sorted(back)}")
    return order


@dataclass
class Schedule:
    sequence: ContractionSequence
    plan: SchedulePlan
    checkpoints: list[int] = field(default_factory=list)   # step counts at subphase ends
    root_vertices: frozenset = frozenset()
    max_shadow: int = 0
    structure: ProductStructure | None = None


class _Emitter:
    def __init__(self, n: int, layer: Mapping[int, int]):
        self.seq = ContractionSequence(n)
        self.layer = dict(layer)

    def contract(self, u: int, v: int, phase: str) -> int:
        lu, lv = self.layer[u], self.layer[v]
        if phase != "III" and lu != lv:
            raise ScheduleError(f"phase {phase} contracts across layers {lu} and {lv}")
        w = self.seq.append(u, v, phase)
        self.layer[w] = min(lu, lv)
        return w


def schedule(graph: Graph, m: CombinatorialMap, ps: ProductStructure | None = None) -> Schedule:
    """Contraction sequence for ``graph`` (a spanning subgraph of ``m``)."""
    n = len(graph)
    if set(graph) != set(range(n)):
        raise ScheduleError("graph vertices must be 0..n-1")
    if m.num_vertices != n:
        raise ScheduleError("graph and map have different vertex counts")
    if ps is None:
        ps = product_structure(m)
    tri = ps.triangulation
    g0 = {v: set(nb) for v, nb in enumerate(tri.adjacency)}
    for v, nb in graph.items():
        for u in nb:
            if u not in g0[v]:
                raise ScheduleError(f"edge {v}-{u} is not in the embedding")
    plan = build_plan(g0, ps)
    plan.check()
    em = _Emitter(n, plan.layer)
    owner = ps.partition.owner()
    td = ps.decomposition
    gadj = {v: set(nb) for v, nb in graph.items()}
    checkpoints = []
    max_shadow = 0
    group_of_b = {}
    for gi, grp in enumerate(plan.groups_b):
        for b in grp:
            group_of_b[b] = gi
    acc: dict[int, dict[int, int]] = defaultdict(dict)   # B group -> layer -> vertex

    # Phase I
    for i, c in enumerate(plan.subtrees):
        verts = plan.subtree_vertices[i]
        if not verts:
            checkpoints.append(len(em.seq))
            continue
        order = elimination_order(td, c, plan.subtree_root_paths[i])
        clusters, ms = _phase1_iterations(em, order, len(plan.subtree_root_paths[i]),
                                          plan, owner, gadj, td, c)
        max_shadow = max(max_shadow, ms)
        # conclusion: one vertex per layer, folded into the group accumulator
        by_layer: dict[int, list[int]] = defaultdict(list)
        for x in clusters:
            by_layer[em.layer[x]].append(x)
        a = acc[group_of_b[i]]
        for lay in sorted(by_layer):
            xs = by_layer[lay]
            cur = xs[0]
            for x in xs[1:]:
                cur = em.contract(cur, x, "I")
            if lay in a:
                cur = em.contract(a[lay], cur, "I")
            a[lay] = cur
        checkpoints.append(len(em.seq))

    # Phase II
    for grp in plan.groups_a:
        cur: dict[int, int] = {}
        for p in grp:
            for v in plan.path_vertices[p]:
                lay = em.layer[v]
                cur[lay] = em.contract(cur[lay], v, "II") if lay in cur else v

    # Phase III
    alive = _alive(n, em.seq)
    by_layer = defaultdict(list)
    for v in alive:
        by_layer[em.layer[v]].append(v)
    tops = []
    for lay in sorted(by_layer):
        xs = sorted(by_layer[lay])
        cur = xs[0]
        for x in xs[1:]:
            cur = em.contract(cur, x, "III")
        tops.append(cur)
    if tops:
        cur = tops[0]
        for x in tops[1:]:
            cur = em.contract(cur, x, "III")
    root_vertices = frozenset(v for p in plan.root_paths for v in plan.path_vertices[p])
    return Schedule(em.seq, plan, checkpoints, root_vertices, max_shadow, ps)


def _alive(n: int, seq: ContractionSequence) -> set[int]:
    alive = set(range(n))
    for u, v, w in seq.steps:
        alive.discard(u)
        alive.discard(v)
        alive.add(w)
    return alive


def _phase1_iterations(em, order, n_first, plan, owner, gadj, td, sub_root):
    """Iterations j = n-1 .. n' of one subphase; returns surviving clusters."""
    pos = {p: i + 1 for i, p in enumerate(order)}          # Q index, 1-based
    n = len(order)
    path_vertices = plan.path_vertices
    qidx = {}
    for p in order:
        for v in path_vertices[p]:
            qidx[v] = pos[p]
    own_vertices = [v for p in order[n_first:] for v in path_vertices[p]]
    max_shadow = 0

    def shadow(x, t):
        out = []
        for u in gadj[x]:
            q = qidx.get(u)
            if q is None:
                raise ScheduleError(f"vertex {x} has a neighbour outside its subtree")
            if q < t:
                out.append(u)
        return frozenset(out)

    if n < 8:
        return own_vertices, 0

    # adjacency of paths that share a bag
    h: dict[int, set[int]] = defaultdict(set)
    for b in td.subtree(sub_root):
        bag = [pos[p] for p in td.bags[b]]
        for a in bag:
            for c in bag:
                if a != c:
                    h[a].add(c)
    parent = list(range(n + 2))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rep = {}                                   # cluster label -> an original member
    members: dict[int, list[int]] = {}         # component root -> cluster labels
    # the last path starts as its own component
    last = n
    members[last] = []
    for v in path_vertices[order[last - 1]]:
        rep[v] = v
        members[last].append(v)
    for j in range(n - 1, n_first - 1, -1):
        if j > n_first:
            comps = sorted({find(q) for q in h[j] if q > j})
        else:
            comps = sorted({find(q) for q in range(n_first + 1, n + 1)})
        table: dict[tuple, int] = {}
        for r in comps:
            for x in members.pop(r, []):
                sh = shadow(rep[x], j + 1)
                max_shadow = max(max_shadow, len(sh))
                key = (em.layer[x], sh)
                if key in table:
                    w = em.contract(table[key], x, "I")
                    rep[w] = rep[x]
                    table[key] = w
                else:
                    table[key] = x
        merged = list(table.values())
        if j > n_first:
            table2: dict[tuple, int] = {}
            for x in merged:
                key = (em.layer[x], shadow(rep[x], j))
                if key in table2:
                    w = em.contract(table2[key], x, "I")
                    rep[w] = rep[x]
                    table2[key] = w
                else:
                    table2[key] = x
            for v in path_vertices[order[j - 1]]:
                sh = shadow(v, j)
                max_shadow = max(max_shadow, len(sh))
                key = (em.layer[v], sh)
                if key in table2:
                    w = em.contract(table2[key], v, "I")
                    rep[w] = v
                    table2[key] = w
                else:
                    rep[v] = v
                    table2[key] = v
            for r in comps:
                parent[r] = j
            members[j] = list(table2.values())
        else:
            return merged, max_shadow
    return [], max_shadow


@dataclass
class AuditReport:
    max_red: int
    phase_max: dict[str, int]
    subphase_path_max: int
    bounds: dict[str, float]
    complete: bool
    violations: list[str]

    @property
    def ok(self) -> bool:
        return self.complete and not self.violations


def audit(graph: Graph, sch: Schedule) -> AuditReport:
    """Replay the sequence on ``graph`` and check every per-phase bound."""
    plan = sch.plan
    seq = sch.sequence
    st = TrigraphState(graph)
    checks = set(sch.checkpoints)
    kp, lp = plan.k_prime, plan.ell_prime
    bounds = {
        "subphase": 3 * (lp + 1),
        "II": 6 * (plan.s + 1),
        "III": 3 * (kp + lp) - 1,
        "overall": overall_bound(plan.genus),
    }
    phase_max: dict[str, int] = {}
    sub_max = 0
    violations = []
    overall = 0

    def path_check(step):
        nonlocal sub_max
        worst = max((st.red[v] for v in sch.root_vertices if v in st.red), default=0)
        sub_max = max(sub_max, worst)
        if worst > bounds["subphase"]:
            violations.append(f"after step {step}: root path vertex with red degree {worst}")

    if 0 in checks:
        path_check(0)
    for i, (u, v, w) in enumerate(seq.steps):
        m = st.contract(u, v, w)
        overall = max(overall, m)
        ph = seq.phases[i] if seq.phases else ""
        phase_max[ph] = max(phase_max.get(ph, 0), m)
        if ph in ("II", "III") and m > bounds[ph]:
            violations.append(f"step {i} (phase {ph}): red degree {m} > {bounds[ph]:g}")
        if i + 1 in checks:
            path_check(i + 1)
    if overall > bounds["overall"]:
        violations.append(f"red degree {overall} exceeds the overall bound")
    if sch.max_shadow > 21:
        violations.append(f"a shadow of size {sch.max_shadow} > 21")
    return AuditReport(overall, phase_max, sub_max, bounds, len(st) <= 1, violations)
