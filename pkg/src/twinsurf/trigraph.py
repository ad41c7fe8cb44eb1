"""Trigraphs, contraction sequences and their replay.

Contracting ``u`` and ``v`` into a fresh vertex ``w`` keeps a black edge
``wx`` only when both ``ux`` and ``vx`` were black edges; any other
adjacency of ``x`` to ``u`` or ``v`` becomes a red edge ``wx``.

Two representations live here: the immutable :class:`Trigraph` value used by
the public ``contract`` operation and the mutable :class:`TrigraphState`
used to replay long sequences quickly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import InvalidStep, SelfContraction, UnknownVertex


def _pair(a, b) -> frozenset:
    return frozenset((a, b))


@dataclass(frozen=True)
class Trigraph:
    vertices: frozenset
    black: frozenset = frozenset()
    red: frozenset = frozenset()

    def __post_init__(self):
        if self.black & self.red:
            raise ValueError("an edge cannot be both black and red")
        for e in self.black | self.red:
            if len(e) != 2:
                raise ValueError("loops are not allowed")
            if not e <= self.vertices:
                raise ValueError(f"edge {sorted(e)} uses an unknown vertex")

    @classmethod
    def from_graph(cls, graph: Mapping[int, Iterable[int]]) -> "Trigraph":
        edges = {_pair(v, u) for v, nb in graph.items() for u in nb if u != v}
        return cls(frozenset(graph), frozenset(edges), frozenset())

    @classmethod
    def from_edges(cls, n: int, edges) -> "Trigraph":
        return cls(frozenset(range(n)), frozenset(_pair(a, b) for a, b in edges), frozenset())

    def red_degree(self, v) -> int:
        return sum(1 for e in self.red if v in e)

    def max_red_degree(self) -> int:
        return max((self.red_degree(v) for v in self.vertices), default=0)

    def neighbours(self, v) -> dict:
        """Map each neighbour of ``v`` to ``True`` if the edge is red."""
        out = {}
        for e in self.black:
            if v in e:
                (u,) = e - {v}
                out[u] = False
        for e in self.red:
            if v in e:
                (u,) = e - {v}
                out[u] = True
        return out


def fresh_label(tg: Trigraph) -> int:
    return max(tg.vertices, default=-1) + 1


def contract(tg: Trigraph, u, v, w=None) -> Trigraph:
    if u not in tg.vertices:
        raise UnknownVertex(f"vertex {u} is not present")
    if v not in tg.vertices:
        raise UnknownVertex(f"vertex {v} is not present")
    if u == v:
        raise SelfContraction(f"cannot contract {u} with itself")
    if w is None:
        w = fresh_label(tg)
    elif w in tg.vertices and w not in (u, v):
        raise InvalidStep(f"label {w} is already in use")
    nu, nv = tg.neighbours(u), tg.neighbours(v)
    rest = tg.vertices - {u, v}
    black = {e for e in tg.black if not (u in e or v in e)}
    red = {e for e in tg.red if not (u in e or v in e)}
    for x in (set(nu) | set(nv)) - {u, v}:
        if x in nu and x in nv and not nu[x] and not nv[x]:
            black.add(_pair(w, x))
        else:
            red.add(_pair(w, x))
    return Trigraph(frozenset(rest | {w}), frozenset(black), frozenset(red))


@dataclass
class ContractionSequence:
    """Steps ``(u, v, w)`` over a graph with vertices ``0..n-1``.

    The vertex created at step ``i`` is labelled ``n + i``.
    """
    n: int
    steps: list[tuple[int, int, int]] = field(default_factory=list)
    phases: list[str] | None = None

    def __len__(self):
        return len(self.steps)

    def append(self, u: int, v: int, phase: str | None = None) -> int:
        w = self.n + len(self.steps)
        self.steps.append((u, v, w))
        if phase is not None:
            if self.phases is None:
                self.phases = [""] * (len(self.steps) - 1)
            self.phases.append(phase)
        elif self.phases is not None:
            self.phases.append("")
        return w

    @property
    def complete(self) -> bool:
        return len(self.steps) == max(self.n - 1, 0)


class TrigraphState:
    """Mutable trigraph with red-degree bookkeeping for fast replay."""

    def __init__(self, graph: Mapping[int, Iterable[int]]):
        self.adj: dict[int, dict[int, bool]] = {v: {} for v in graph}
        for v, nb in graph.items():
            for u in nb:
                if u != v:
                    self.adj[v][u] = False
                    self.adj.setdefault(u, {})[v] = False
        self.red = {v: 0 for v in self.adj}
        self.hist = [len(self.adj)]
        self.max_red = 0

    def _bump(self, v: int, delta: int) -> None:
        d = self.red[v]
        self.hist[d] -= 1
        d += delta
        self.red[v] = d
        while len(self.hist) <= d:
            self.hist.append(0)
        self.hist[d] += 1
        if d > self.max_red:
            self.max_red = d

    def _settle(self) -> None:
        while self.max_red > 0 and self.hist[self.max_red] == 0:
            self.max_red -= 1

    def __len__(self):
        return len(self.adj)

    def contract(self, u: int, v: int, w: int) -> int:
        """Contract ``u`` and ``v`` into ``w``; returns the max red degree afterwards."""
        adj = self.adj
        if u not in adj:
            raise UnknownVertex(f"vertex {u} is not present")
        if v not in adj:
            raise UnknownVertex(f"vertex {v} is not present")
        if u == v:
            raise SelfContraction(f"cannot contract {u} with itself")
        if w in adj:
            raise InvalidStep(f"label {w} is already in use")
        nu, nv = adj.pop(u), adj.pop(v)
        for x, r in nu.items():
            if x != v:
                del adj[x][u]
                if r:
                    self._bump(x, -1)
        for x, r in nv.items():
            if x != u:
                del adj[x][v]
                if r:
                    self._bump(x, -1)
        for z in (u, v):
            d = self.red.pop(z)
            self.hist[d] -= 1
        nw: dict[int, bool] = {}
        for x, r in nu.items():
            if x == v:
                continue
            nw[x] = r or x not in nv or nv[x]
        for x, r in nv.items():
            if x == u or x in nw:
                continue
            nw[x] = True
        adj[w] = nw
        self.red[w] = 0
        self.hist[0] += 1
        reds = 0
        for x, r in nw.items():
            adj[x][w] = r
            if r:
                reds += 1
                self._bump(x, 1)
        if reds:
            self._bump(w, reds)
        self._settle()
        return self.max_red

    def red_neighbours(self, v: int) -> int:
        return self.red[v]


@dataclass
class ReplayReport:
    step_max: list[int]
    max_red: int
    complete: bool
    phase_max: dict[str, int] = field(default_factory=dict)

    def summary(self) -> str:
        return f"steps {len(self.step_max)} maxred {self.max_red} complete {self.complete}"


def replay(graph: Mapping[int, Iterable[int]] | Trigraph, seq: ContractionSequence) -> ReplayReport:
    if isinstance(graph, Trigraph):
        if graph.red:
            raise InvalidStep("replay starts from a graph without red edges")
        g = {v: set() for v in graph.vertices}
        for e in graph.black:
            a, b = tuple(e)
            g[a].add(b)
            g[b].add(a)
        graph = g
    if set(graph) != set(range(seq.n)):
        raise InvalidStep(f"sequence is for {seq.n} vertices, graph has {len(graph)}")
    st = TrigraphState(graph)
    step_max = []
    phase_max: dict[str, int] = {}
    overall = 0
    for i, (u, v, w) in enumerate(seq.steps):
        if w != seq.n + i:
            raise InvalidStep(f"expected fresh label {seq.n + i}, got {w}", i)
        try:
            m = st.contract(u, v, w)
        except (UnknownVertex, SelfContraction, InvalidStep) as exc:
            raise InvalidStep(str(exc), i) from exc
        step_max.append(m)
        overall = max(overall, m)
        if seq.phases is not None:
            p = seq.phases[i]
            phase_max[p] = max(phase_max.get(p, 0), m)
    return ReplayReport(step_max, overall, len(st) <= 1, phase_max)
