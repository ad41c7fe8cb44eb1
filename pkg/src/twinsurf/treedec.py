"""Rooted tree-decompositions over path identifiers and their verifier."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .bfs import QuotientGraph
from .errors import DecompositionError


@dataclass
class RootedTreeDecomposition:
    bags: list[frozenset] = field(default_factory=list)
    parent: list[int] = field(default_factory=list)   # -1 marks the root

    def add(self, bag, parent: int = -1) -> int:
        if parent == -1 and self.bags:
            raise DecompositionError("a decomposition has a single root bag")
        self.bags.append(frozenset(bag))
        self.parent.append(parent)
        return len(self.bags) - 1

    @property
    def root(self) -> int:
        return self.parent.index(-1)

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in self.bags]
        for b, p in enumerate(self.parent):
            if p != -1:
                ch[p].append(b)
        return ch

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def subtree(self, b: int) -> list[int]:
        ch = self.children()
        out, stack = [], [b]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(ch[x])
        return out

    def graft(self, other: "RootedTreeDecomposition", parent: int) -> int:
        """Attach ``other`` below bag ``parent``; returns the new id of its root."""
        offset = len(self.bags)
        for b, p in zip(other.bags, other.parent):
            self.bags.append(b)
            self.parent.append(parent if p == -1 else p + offset)
        return offset + other.root


def check_decomposition(td: RootedTreeDecomposition, graph: QuotientGraph) -> None:
    """Check the cover, edge and connectivity axioms; raise on the first failure."""
    if td.parent.count(-1) != 1:
        raise DecompositionError("decomposition must have exactly one root")
    # the parent pointers must form a tree
    seen = set()
    for b in range(len(td.bags)):
        path = []
        x = b
        while x != -1 and x not in seen:
            if x in path:
                raise DecompositionError("parent pointers contain a cycle")
            path.append(x)
            x = td.parent[x]
        seen.update(path)
    where: dict[int, list[int]] = defaultdict(list)
    for b, bag in enumerate(td.bags):
        for v in bag:
            where[v].append(b)
    for v in graph.vertices:
        if v not in where:
            raise DecompositionError(f"path {v} lies in no bag")
    extra = set(where) - set(graph.vertices)
    if extra:
        raise DecompositionError(f"bags mention unknown paths {sorted(extra)[:5]}")
    for v, bs in where.items():
        # bags holding v form a subtree iff exactly one of them has its parent outside
        inside = set(bs)
        tops = [b for b in bs if td.parent[b] not in inside]
        if len(tops) != 1:
            raise DecompositionError(f"bags holding path {v} are not connected")
    for e in graph.edges():
        a, b = tuple(e)
        if not set(where[a]) & set(where[b]):
            raise DecompositionError(f"edge between paths {a} and {b} lies in no bag")
