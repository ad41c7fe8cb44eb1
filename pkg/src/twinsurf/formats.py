"""Text formats: embeddings, contraction sequences, decompositions, graphs.

Embedding::

    map <vertices> <edges>
    v <id>: <edge><+|-> <edge><+|-> ...

Sequence::

    ctrseq <vertices>
    c <u> <v> -> <w> [I|II|III]
    bound <value>                        (optional)
    maxred <value>

Decomposition::

    decomposition
    genus <g>
    root <v>                             (BFS root the paths hang from)
    p <id>: <v> <v> ...                  (top to bottom)
    b <id> parent <id|root>: <path> ...
    bound <name> <observed> <limit>

Graph (edge list)::

    graph <vertices> <edges>
    e <u> <v>

Blank lines and everything after ``#`` are ignored.
"""
from __future__ import annotations

import re
from typing import Iterable

from .bfs import PathPartition, VerticalPath
from .embedding import CombinatorialMap, validate_map
from .errors import MapError, ParseError
from .treedec import RootedTreeDecomposition
from .trigraph import ContractionSequence


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", no) from None


# ---------------------------------------------------------------- embeddings

_DART = re.compile(r"^(\d+)([+-])$")


def parse_map(text: str) -> CombinatorialMap:
    it = _lines(text)
    try:
        no, header = next(it)
    except StopIteration:
        raise ParseError("empty embedding file") from None
    parts = header.split()
    if len(parts) != 3 or parts[0] != "map":
        raise ParseError("expected 'map <vertices> <edges>'", no)
    n, m = _int(parts[1], no), _int(parts[2], no)
    rotations: list = [None] * n
    for no, line in it:
        head, sep, body = line.partition(":")
        hp = head.split()
        if not sep or len(hp) != 2 or hp[0] != "v":
            raise ParseError("expected 'v <id>: <edge><sign> ...'", no)
        v = _int(hp[1], no)
        if not 0 <= v < n:
            raise ParseError(f"vertex {v} out of range", no)
        if rotations[v] is not None:
            raise ParseError(f"vertex {v} listed twice", no)
        rot = []
        for tok in body.split():
            mt = _DART.match(tok)
            if not mt:
                raise ParseError(f"bad rotation entry {tok!r}", no)
            e = int(mt.group(1))
            if e >= m:
                raise ParseError(f"edge {e} out of range", no)
            rot.append((e, 1 if mt.group(2) == "+" else -1))
        rotations[v] = rot
    missing = [v for v in range(n) if rotations[v] is None]
    if missing:
        raise ParseError(f"vertices without rotation: {missing[:5]}")
    count: dict[int, int] = {}
    for rot in rotations:
        for e, _ in rot:
            count[e] = count.get(e, 0) + 1
    bad = [e for e in range(m) if count.get(e) != 2]
    if bad:
        raise ParseError(f"edge {bad[0]} must occur exactly twice")
    try:
        cmap = CombinatorialMap.from_rotation_lists(rotations)
        validate_map(cmap)
    except MapError as exc:
        raise ParseError(str(exc)) from exc
    return cmap


def canonical_map(cm: CombinatorialMap) -> CombinatorialMap:
    """Renumber edges by first appearance, vertex by vertex.

    Each rotation starts at its already-numbered edge of smallest new id (or
    at its smallest old id when none is numbered yet), so every list starts
    at its minimum and the form is a fixed point.
    """
    perm: dict[int, int] = {}
    rots = []
    for rot in cm.rotation:
        es = [cm.edge[d] for d in rot]
        if es:
            known = [i for i, e in enumerate(es) if e in perm]
            if known:
                i = min(known, key=lambda j: perm[es[j]])
            else:
                i = min(range(len(es)), key=lambda j: (es[j], j))
            es = es[i:] + es[:i]
        for e in es:
            if e not in perm:
                perm[e] = len(perm)
        rots.append([(perm[e], cm.sign[e]) for e in es])
    return CombinatorialMap.from_rotation_lists(rots)


def format_map(cm: CombinatorialMap, comment: str | None = None) -> str:
    out = []
    if comment:
        out.append(f"# {comment}")
    out.append(f"map {cm.num_vertices} {cm.num_edges}")
    for v, rot in enumerate(cm.rotation):
        toks = [f"{cm.edge[d]}{'+' if cm.sign[cm.edge[d]] > 0 else '-'}" for d in rot]
        out.append(f"v {v}: " + " ".join(toks))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- sequences

def format_sequence(seq: ContractionSequence, maxred: int, phases: bool = False,
                    bound: int | None = None) -> str:
    out = [f"ctrseq {seq.n}"]
    for i, (u, v, w) in enumerate(seq.steps):
        line = f"c {u} {v} -> {w}"
        if phases and seq.phases is not None and seq.phases[i]:
            line += f" {seq.phases[i]}"
        out.append(line)
    if bound is not None:
        out.append(f"bound {bound}")
    out.append(f"maxred {maxred}")
    return "\n".join(out) + "\n"


def parse_sequence(text: str) -> tuple[ContractionSequence, int | None, int | None]:
    """Returns ``(sequence, maxred, bound)``; missing lines give ``None``."""
    it = _lines(text)
    try:
        no, header = next(it)
    except StopIteration:
        raise ParseError("empty sequence file") from None
    parts = header.split()
    if len(parts) != 2 or parts[0] != "ctrseq":
        raise ParseError("expected 'ctrseq <vertices>'", no)
    seq = ContractionSequence(_int(parts[1], no))
    maxred = bound = None
    phases: list[str] = []
    for no, line in it:
        toks = line.split()
        if maxred is not None:
            raise ParseError("content after the maxred line", no)
        if toks[0] == "maxred":
            if len(toks) != 2:
                raise ParseError("expected 'maxred <value>'", no)
            maxred = _int(toks[1], no)
            continue
        if toks[0] == "bound":
            if len(toks) != 2 or bound is not None:
                raise ParseError("expected a single 'bound <value>' line", no)
            bound = _int(toks[1], no)
            continue
        if bound is not None:
            raise ParseError("step after the bound line", no)
        if toks[0] != "c" or len(toks) not in (5, 6) or toks[3] != "->":
            raise ParseError("expected 'c <u> <v> -> <w> [phase]'", no)
        u, v, w = _int(toks[1], no), _int(toks[2], no), _int(toks[4], no)
        seq.steps.append((u, v, w))
        phases.append(toks[5] if len(toks) == 6 else "")
    if any(phases):
        seq.phases = phases
    return seq, maxred, bound


# ---------------------------------------------------------------- decompositions

def format_decomposition(partition: PathPartition, td: RootedTreeDecomposition,
                         genus: int, bounds: Iterable[tuple[str, int, int]] = (),
                         root: int = 0) -> str:
    out = ["decomposition", f"genus {genus}", f"root {root}"]
    for pid in sorted(partition.paths):
        vs = " ".join(str(v) for v in partition[pid].vertices)
        out.append(f"p {pid}: {vs}")
    for b, bag in enumerate(td.bags):
        par = "root" if td.parent[b] == -1 else str(td.parent[b])
        out.append(f"b {b} parent {par}: " + " ".join(str(p) for p in sorted(bag)))
    for name, observed, limit in bounds:
        out.append(f"bound {name} {observed} {limit}")
    return "\n".join(out) + "\n"


def parse_decomposition(text: str):
    """Returns ``(partition, decomposition, genus, root, bounds)``."""
    it = _lines(text)
    try:
        no, header = next(it)
    except StopIteration:
        raise ParseError("empty decomposition file") from None
    if header != "decomposition":
        raise ParseError("expected 'decomposition'", no)
    genus = root = None
    paths = []
    bags: dict[int, tuple[int, frozenset]] = {}
    bounds = []
    for no, line in it:
        toks = line.split()
        if toks[0] == "genus" and len(toks) == 2:
            genus = _int(toks[1], no)
        elif toks[0] == "root" and len(toks) == 2:
            root = _int(toks[1], no)
        elif toks[0] == "p":
            head, sep, body = line.partition(":")
            hp = head.split()
            if not sep or len(hp) != 2:
                raise ParseError("expected 'p <id>: <v> ...'", no)
            vs = tuple(_int(t, no) for t in body.split())
            if not vs:
                raise ParseError("empty path", no)
            paths.append(VerticalPath(_int(hp[1], no), vs))
        elif toks[0] == "b":
            head, sep, body = line.partition(":")
            hp = head.split()
            if not sep or len(hp) != 4 or hp[2] != "parent":
                raise ParseError("expected 'b <id> parent <id|root>: ...'", no)
            bid = _int(hp[1], no)
            par = -1 if hp[3] == "root" else _int(hp[3], no)
            if bid in bags:
                raise ParseError(f"bag {bid} listed twice", no)
            bags[bid] = (par, frozenset(_int(t, no) for t in body.split()))
        elif toks[0] == "bound" and len(toks) == 4:
            bounds.append((toks[1], _int(toks[2], no), _int(toks[3], no)))
        else:
            raise ParseError(f"unrecognised line {line!r}", no)
    if genus is None:
        raise ParseError("missing genus line")
    if root is None:
        raise ParseError("missing root line")
    if sorted(bags) != list(range(len(bags))):
        raise ParseError("bag ids must be 0..n-1")
    td = RootedTreeDecomposition([bags[b][1] for b in range(len(bags))],
                                 [bags[b][0] for b in range(len(bags))])
    try:
        part = PathPartition(paths)
    except Exception as exc:
        raise ParseError(str(exc)) from exc
    return part, td, genus, root, bounds


# ---------------------------------------------------------------- graphs

def parse_graph(text: str) -> dict[int, set[int]]:
    it = _lines(text)
    try:
        no, header = next(it)
    except StopIteration:
        raise ParseError("empty graph file") from None
    parts = header.split()
    if len(parts) != 3 or parts[0] != "graph":
        raise ParseError("expected 'graph <vertices> <edges>'", no)
    n, m = _int(parts[1], no), _int(parts[2], no)
    g: dict[int, set[int]] = {v: set() for v in range(n)}
    count = 0
    for no, line in it:
        toks = line.split()
        if len(toks) != 3 or toks[0] != "e":
            raise ParseError("expected 'e <u> <v>'", no)
        u, v = _int(toks[1], no), _int(toks[2], no)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError("edge endpoint out of range", no)
        if u == v:
            raise ParseError("loops are not allowed", no)
        g[u].add(v)
        g[v].add(u)
        count += 1
    if count != m:
        raise ParseError(f"header announces {m} edges, found {count}")
    return g


def format_graph(g) -> str:
    edges = sorted({(min(a, b), max(a, b)) for a, nb in g.items() for b in nb})
    out = [f"graph {len(g)} {len(edges)}"] + [f"e {a} {b}" for a, b in edges]
    return "\n".join(out) + "\n"
