"""Command-line interface.

Exit codes: 0 on success, 2 when an input file cannot be parsed, 3 when an
invariant fails (bad embedding, violated bound, invalid contraction step).
"""
from __future__ import annotations

import argparse
import math
import sys

from . import generators
from .decomposition import check_product_structure, product_structure, structure_from_parts
from .embedding import euler_genus
from .errors import ParseError, TwinsurfError
from .formats import (canonical_map, format_decomposition, format_graph, format_map,
                      format_sequence, parse_decomposition, parse_graph, parse_map,
                      parse_sequence)
from .oracle import exact_twinwidth, sample_lowerbound_witness
from .scheduler import audit, overall_bound, schedule
from .trigraph import replay

EXIT_OK, EXIT_PARSE, EXIT_INVARIANT = 0, 2, 3


class Failure(TwinsurfError):
    """A check performed by a command did not pass."""


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _graph_of(cmap, graph_path: str | None):
    if graph_path is None:
        return {v: set(nb) for v, nb in enumerate(cmap.adjacency)}
    g = parse_graph(_read(graph_path))
    if len(g) != cmap.num_vertices:
        raise Failure(f"graph has {len(g)} vertices, embedding has {cmap.num_vertices}")
    return g


# ---------------------------------------------------------------- commands

def cmd_genus(args) -> int:
    info = euler_genus(parse_map(_read(args.input)))
    print(info.describe())
    return EXIT_OK


def cmd_decompose(args) -> int:
    cmap = parse_map(_read(args.input))
    ps = product_structure(cmap, root=args.root)
    stats = check_product_structure(ps, strict=False)
    limits = ps.bounds()
    bounds = [(name, stats[name], limits[name]) for name in ("root", "children", "bag")]
    _write(format_decomposition(ps.partition, ps.decomposition, ps.genus, bounds,
                                root=ps.tree.roots[0]), args.output)
    if stats["problems"]:
        check_product_structure(ps, strict=True)
    return EXIT_OK


def cmd_check(args) -> int:
    """Re-verify a decomposition file against its embedding."""
    cmap = parse_map(_read(args.embedding))
    part, td, genus, root, _ = parse_decomposition(_read(args.decomposition))
    ps = structure_from_parts(cmap, part, td, genus, root)
    stats = check_product_structure(ps, strict=True)
    print(f"genus {genus} paths {stats['paths']} root {stats['root']} "
          f"children {stats['children']} bag {stats['bag']} ok")
    return EXIT_OK


def cmd_schedule(args) -> int:
    cmap = parse_map(_read(args.input))
    graph = _graph_of(cmap, args.graph)
    g = euler_genus(cmap).euler_genus
    if g == 0 and not args.planar_fallback:
        raise Failure("the input is planar; pass --planar-fallback to schedule it anyway")
    sch = schedule(graph, cmap)
    rep = audit(graph, sch)
    bound = math.floor(overall_bound(g))
    _write(format_sequence(sch.sequence, rep.max_red, phases=args.emit_phases, bound=bound),
           args.output)
    if not rep.ok:
        raise Failure("; ".join(rep.violations) or "sequence is incomplete")
    return EXIT_OK


def cmd_verify(args) -> int:
    cmap = parse_map(_read(args.embedding))
    seq, maxred, bound = parse_sequence(_read(args.sequence))
    graph = _graph_of(cmap, args.graph)
    rep = replay(graph, seq)
    for i, m in enumerate(rep.step_max):
        print(f"step {i} maxred {m}")
    for phase in sorted(rep.phase_max):
        if phase:
            print(f"phase {phase} maxred {rep.phase_max[phase]}")
    if bound is None:
        bound = math.floor(overall_bound(euler_genus(cmap).euler_genus))
    print(f"{rep.summary()} bound {bound}")
    if not rep.complete:
        raise Failure("sequence does not end with a single vertex")
    if maxred is not None and maxred != rep.max_red:
        raise Failure(f"maxred mismatch: file says {maxred}, replay gives {rep.max_red}")
    if rep.max_red > bound:
        raise Failure(f"red degree {rep.max_red} exceeds the bound {bound}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    print(exact_twinwidth(parse_graph(_read(args.input)), budget=args.budget))
    return EXIT_OK


def cmd_generate(args) -> int:
    fam, params = args.family, args.params
    need = {"toroidal-grid": 1, "projective-K6": 0, "torus-K7": 0,
            "random-disk": 1, "random-dense": 1}[fam]
    if len(params) != need:
        raise ParseError(f"{fam} takes {need} integer parameter(s)")
    if fam == "toroidal-grid":
        cmap = generators.toroidal_grid(params[0])
    elif fam == "projective-K6":
        cmap = generators.projective_k6()
    elif fam == "torus-K7":
        cmap = generators.torus_k7()
    elif fam == "random-disk":
        cmap = generators.random_disk(params[0], args.seed)
    else:
        cmap = generators.random_dense(params[0], args.seed)
    info = euler_genus(cmap)
    if args.graph_output:
        _write(format_graph({v: set(nb) for v, nb in enumerate(cmap.adjacency)}), args.graph_output)
    _write(format_map(canonical_map(cmap), comment=f"{fam} {info.describe()}"), args.output)
    return EXIT_OK


def cmd_lowerbound(args) -> int:
    _, rep = sample_lowerbound_witness(args.genus, seed=args.seed, n=args.n)
    print("\n".join(rep.lines()))
    return EXIT_OK if rep.implication_ok else EXIT_INVARIANT


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twinsurf", description="Twin-width of surface-embedded graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("genus", help="Euler genus and orientability of an embedding")
    p.add_argument("input")
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("decompose", help="vertical-path product structure")
    p.add_argument("input")
    p.add_argument("--root", type=int, default=0, help="BFS root for non-planar inputs")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("check", help="re-verify a decomposition file")
    p.add_argument("embedding")
    p.add_argument("decomposition")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("schedule", help="emit a contraction sequence")
    p.add_argument("input")
    p.add_argument("--graph", help="edge-list file of a spanning subgraph to contract")
    p.add_argument("--emit-phases", action="store_true", help="tag steps with I/II/III")
    p.add_argument("--planar-fallback", action="store_true",
                   help="allow planar inputs, treated with the genus-one parameters")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("verify", help="replay a contraction sequence")
    p.add_argument("embedding")
    p.add_argument("sequence")
    p.add_argument("--graph", help="edge-list file the sequence was built for")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact twin-width of a tiny graph")
    p.add_argument("input")
    p.add_argument("--budget", type=int, default=9)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="write a generated embedding")
    p.add_argument("family", choices=["toroidal-grid", "projective-K6", "torus-K7",
                                      "random-disk", "random-dense"])
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.add_argument("--graph-output", help="also write the underlying graph as an edge list")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("lowerbound", help="random lower-bound witness report")
    p.add_argument("genus", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, help="override the number of vertices")
    p.set_defaults(func=cmd_lowerbound)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TwinsurfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
