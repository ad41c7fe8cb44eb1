"""Exact twin-width of tiny graphs and the random lower-bound witness.

After any sequence of contractions the trigraph depends only on the
partition of the original vertices into contracted parts: two parts are
joined by a black edge when every pair between them is an edge, by a red
edge when some but not all pairs are, and not at all otherwise.  The exact
search therefore memoizes on partitions, which is exact without any
isomorphism reasoning.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import TooLarge
from .trigraph import Trigraph, contract

Graph = Mapping[int, Iterable[int]]


def _bitsets(graph: Graph) -> tuple[list[int], list[int]]:
    verts = sorted(graph)
    index = {v: i for i, v in enumerate(verts)}
    nb = [0] * len(verts)
    for v, us in graph.items():
        for u in us:
            if u != v:
                nb[index[v]] |= 1 << index[u]
                nb[index[u]] |= 1 << index[v]
    return verts, nb


def _red_degrees(parts: tuple[int, ...], nb: list[int]) -> list[int]:
    """Red degree of each part of a partition given as vertex bitmasks."""
    # union of neighbourhoods and intersection of neighbourhoods per part
    union, inter = [], []
    for p in parts:
        u, i = 0, -1
        x = p
        while x:
            low = x & -x
            b = low.bit_length() - 1
            u |= nb[b]
            i &= nb[b]
            x ^= low
        union.append(u)
        inter.append(i)
    out = []
    for a, p in enumerate(parts):
        d = 0
        for b, q in enumerate(parts):
            if a == b:
                continue
            # q sees p homogeneously iff every vertex of p is adjacent to all of q or none
            if (union[a] & q) and (inter[a] & q) != q:
                d += 1
        out.append(d)
    return out


def _merge(parts: tuple[int, ...], i: int, j: int) -> tuple[int, ...]:
    merged = parts[i] | parts[j]
    rest = [p for k, p in enumerate(parts) if k != i and k != j]
    rest.append(merged)
    return tuple(sorted(rest))


def exact_twinwidth(graph: Graph, budget: int = 9) -> int:
    """Minimum over all contraction sequences of the largest red degree."""
    n = len(graph)
    if n > budget or budget > 9:
        raise TooLarge(f"{n} vertices exceed the oracle budget of {min(budget, 9)}")
    if n <= 1:
        return 0
    _, nb = _bitsets(graph)
    start = tuple(1 << i for i in range(n))
    lower = first_contraction_lower_bound(graph)
    for d in range(lower, n):
        failed: set[tuple[int, ...]] = set()
        if _feasible(start, nb, d, failed):
            return d
    return n - 1


def _feasible(parts, nb, d, failed) -> bool:
    if len(parts) == 1:
        return True
    if parts in failed:
        return False
    for i, j in combinations(range(len(parts)), 2):
        nxt = _merge(parts, i, j)
        if max(_red_degrees(nxt, nb)) <= d and _feasible(nxt, nb, d, failed):
            return True
    failed.add(parts)
    return False


def naive_twinwidth(graph: Graph) -> int:
    """Exhaustive search over all sequences, replaying each with ``contract``.

    Exponential and unpruned; meant as an independent check on at most six
    vertices.
    """
    tg = Trigraph.from_graph(graph)

    def best(t: Trigraph) -> int:
        if len(t.vertices) <= 1:
            return 0
        out = None
        for u, v in combinations(sorted(t.vertices), 2):
            t2 = contract(t, u, v)
            val = max(t2.max_red_degree(), best(t2))
            if out is None or val < out:
                out = val
        return out

    return best(tg)


def first_contraction_lower_bound(graph: Graph) -> int:
    """Smallest red degree of the merged vertex over all first contractions."""
    verts, nb = _bitsets(graph)
    n = len(verts)
    if n < 2:
        return 0
    best = None
    for i, j in combinations(range(n), 2):
        sym = (nb[i] ^ nb[j]) & ~((1 << i) | (1 << j))
        d = bin(sym).count("1")
        if best is None or d < best:
            best = d
    return best


def heawood_number(g: int) -> int:
    """floor((7 + sqrt(1 + 24 g)) / 2), computed exactly."""
    return (7 + math.isqrt(1 + 24 * g)) // 2


@dataclass
class WitnessReport:
    genus: int
    n: int
    seed: int
    edges: list[tuple[int, int]]
    degree_ok: bool
    codegree_ok: bool
    degree_range: tuple[int, int]
    codegree_range: tuple[int, int]
    first_contraction: int
    predicted: float

    @property
    def conditions_hold(self) -> bool:
        return self.degree_ok and self.codegree_ok

    @property
    def implication_ok(self) -> bool:
        """The conditional inequality: if both windows hold, the bound holds."""
        return (not self.conditions_hold) or self.first_contraction >= self.predicted

    def lines(self) -> list[str]:
        return [
            f"genus {self.genus}",
            f"n {self.n}",
            f"seed {self.seed}",
            f"edges {len(self.edges)}",
            f"degree range {self.degree_range[0]} {self.degree_range[1]} window "
            f"{'ok' if self.degree_ok else 'violated'}",
            f"codegree range {self.codegree_range[0]} {self.codegree_range[1]} window "
            f"{'ok' if self.codegree_ok else 'violated'}",
            f"first contraction red degree {self.first_contraction}",
            f"predicted lower bound {self.predicted:.6f}",
            f"conditions {'hold' if self.conditions_hold else 'fail'}",
            f"implication {'verified' if self.implication_ok else 'VIOLATED'}",
        ]


def sample_lowerbound_witness(g: int, seed: int = 0, n: int | None = None) -> tuple[dict, WitnessReport]:
    """Sample G(n, 1/2) with n the Heawood number of ``g`` (or ``n`` when given)."""
    if n is None:
        n = heawood_number(g)
    rng = np.random.default_rng(seed)
    coins = rng.random((n, n)) < 0.5
    upper = np.triu(coins, 1)
    adj_m = upper | upper.T
    graph = {v: set(np.flatnonzero(adj_m[v]).tolist()) for v in range(n)}
    edges = [(int(a), int(b)) for a, b in zip(*np.nonzero(upper))]
    deg = adj_m.sum(axis=1)
    co = adj_m.astype(np.int64) @ adj_m.astype(np.int64)
    iu = np.triu_indices(n, 1)
    codeg = co[iu]
    slack = n ** 0.75
    deg_ok = bool(np.all(np.abs(deg - (n - 1) / 2) <= slack))
    co_ok = bool(np.all(np.abs(codeg - (n - 2) / 4) <= slack)) if n > 1 else True
    first = first_contraction_lower_bound(graph) if n >= 2 else 0
    predicted = n / 2 - 2 - 4 * slack
    report = WitnessReport(
        g, n, seed, edges, deg_ok, co_ok,
        (int(deg.min()), int(deg.max())) if n else (0, 0),
        (int(codeg.min()), int(codeg.max())) if len(codeg) else (0, 0),
        first, predicted,
    )
    return graph, report
