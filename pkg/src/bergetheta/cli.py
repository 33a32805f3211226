"""Command line entry point: ``bergetheta <command> ...``.

Exit codes: 0 success, 1 usage, 2 parse error, 3 budget exceeded or
inconclusive, 4 fast search disagrees with the oracle.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from contextlib import contextmanager

from . import construction, hypergraph, oracle, poly, reduction, search

log = logging.getLogger("bergetheta")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET, EXIT_MISMATCH = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _dump_json(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load(path):
    try:
        with open(path, encoding="ascii") as fh:
            return hypergraph.loads_with_sources(fh.read())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_PARSE) from None
    except (hypergraph.ParseError, UnicodeDecodeError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from None


@contextmanager
def _timer(timings, key):
    start = time.perf_counter()
    yield
    timings[key] = round(time.perf_counter() - start, 6)


def cmd_generate(args):
    try:
        params = construction.ConstructionParams(args.k, args.r, args.q, args.d, args.seed)
    except construction.ConstructionError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    timings = {}
    try:
        with _timer(timings, "build"):
            gen = construction.build_graph(params, max_tuples=args.max_tuples, workers=args.workers)
    except construction.BudgetExceeded as exc:
        raise CliError(str(exc), EXIT_BUDGET) from None

    H = gen.hypergraph
    hypergraph.write(H, args.out)
    if args.polys:
        with open(args.polys, "w", encoding="ascii", newline="\n") as fh:
            fh.write("".join(poly.dumps(f) for f in gen.polys))
    stats = {
        "params": params.as_dict(),
        "seed": params.seed,
        "vertices": params.n,
        "candidates": params.candidates,
        "edge_count": H.m,
        "expected_edges": params.expected_edges,
        "edge_probability": str(params.edge_probability),
    }
    if args.census_cap is not None:
        c = construction.census(H, params.k, args.census_cap, workers=args.workers)
        stats["census"] = c.summary()
    if args.timings:
        stats["timings"] = timings
    if args.stats:
        _dump_json(stats, args.stats)
    print(f"wrote {H.m} edges on {params.n} vertices to {args.out} (expected {params.expected_edges})")
    return EXIT_OK


def _format_witness(w):
    lines = [f"endpoints {w.x} {w.y}"]
    for p in w.paths:
        cores = " ".join(map(str, p.core_vertices))
        edges = " ".join(map(str, p.edge_indices))
        lines.append(f"path cores {cores} edges {edges}")
    return "\n".join(lines)


def cmd_detect(args):
    H, _ = _load(args.input)
    try:
        w = search.find_theta(H, args.k, args.t, args.node_budget)
    except search.SearchInconclusive as exc:
        print(f"inconclusive: {exc}")
        return EXIT_BUDGET
    except search.InvalidQuery as exc:
        raise CliError(str(exc), EXIT_USAGE) from None

    if w is not None and not hypergraph.validate_theta(H, w):
        print("internal error: returned witness does not validate", file=sys.stderr)
        return EXIT_MISMATCH
    if args.oracle:
        try:
            expected = oracle.oracle_has_theta(H, args.k, args.t)
        except oracle.OracleRefusal as exc:
            raise CliError(str(exc), EXIT_BUDGET) from None
        if expected != (w is not None):
            print(
                f"MISMATCH: search says {'present' if w else 'absent'}, "
                f"oracle says {'present' if expected else 'absent'}",
                file=sys.stderr,
            )
            return EXIT_MISMATCH
    if w is None:
        print("absent")
    else:
        print("present")
        print(_format_witness(w))
    if args.oracle:
        print("oracle: agrees")
    return EXIT_OK


def cmd_reduce(args):
    H, _ = _load(args.input)
    try:
        params = reduction.ReductionParams(args.m, args.tie_break, args.seed)
        G = reduction.reduce(H, params)
    except reduction.ReductionError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    with open(args.out, "w", encoding="ascii", newline="\n") as fh:
        fh.write(reduction.dumps(G))
    print(f"instances {len(G.instances)}")
    print(f"max multiplicity {G.max_multiplicity()}")
    if args.k is not None and args.t is not None:
        try:
            bound = reduction.multiplicity_bound(args.k, args.t, H.r, args.m)
        except reduction.ReductionError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
        verdict = "within" if G.max_multiplicity() <= bound else "EXCEEDS"
        print(f"multiplicity bound {bound} ({verdict})")
    return EXIT_OK


def cmd_census(args):
    H, _ = _load(args.input)
    timings = {}
    try:
        with _timer(timings, "census"):
            c = construction.census(
                H, args.k, args.cap, scope=args.scope, sample=args.sample, seed=args.seed, workers=args.workers
            )
    except construction.ConstructionError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    out = c.summary()
    if args.threshold is not None:
        try:
            out["threshold"] = args.threshold
            out["bad_pairs"] = [list(p) for p in construction.bad_pairs(c, args.threshold)]
        except construction.ConstructionError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
    if args.timings:
        out["timings"] = timings
    _dump_json(out, args.out)
    return EXIT_BUDGET if c.inconclusive else EXIT_OK


def cmd_repair(args):
    H, _ = _load(args.input)
    threshold = args.threshold
    if threshold is None:
        try:
            threshold = construction.default_threshold(args.k, H.r)
        except construction.ConstructionError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
    timings = {}
    try:
        with _timer(timings, "repair"):
            res = construction.repair(H, args.k, threshold, workers=args.workers)
    except construction.ConstructionError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    hypergraph.write(res.hypergraph, args.out)

    after = construction.census(res.hypergraph, args.k, workers=args.workers)
    remaining = construction.bad_pairs(after, threshold)
    stats = {
        "k": args.k,
        "threshold": threshold,
        "edges_before": H.m,
        "edges_after": res.hypergraph.m,
        "deleted": res.log,
        "initial_bad_pairs": [list(p) for p in res.initial_bad],
        "initial_excess": res.initial_excess,
        "remaining_bad_pairs": len(remaining),
        "max_paths_after": after.max,
    }
    if args.certify:
        stats["theta_free_t"] = _smallest_free_t(res.hypergraph, args.k, threshold + 1, args.node_budget)
    if args.timings:
        stats["timings"] = timings
    if args.log:
        _dump_json(stats, args.log)
    print(f"deleted {len(res.log)} of {H.m} edges")
    print(f"{len(remaining)} bad pairs remaining")
    return EXIT_OK if not remaining else EXIT_MISMATCH


def _smallest_free_t(H, k, upper, node_budget):
    for t in range(1, upper + 1):
        try:
            if search.is_theta_free(H, k, t, node_budget):
                return t
        except search.SearchInconclusive:
            return None
    return None


def build_parser():
    p = _Parser(prog="bergetheta", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="sample a random polynomial hypergraph")
    g.add_argument("-k", type=int, required=True)
    g.add_argument("-r", type=int, required=True)
    g.add_argument("-q", type=int, required=True)
    g.add_argument("-d", type=int, default=None, help="degree bound (default k(2k+1))")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="graph.txt")
    g.add_argument("--stats", "--stats-out", dest="stats", default="stats.json")
    g.add_argument("--polys", default=None, help="also dump the polynomials here")
    g.add_argument("--census-cap", type=int, default=None, help="add a path census (k-paths) to the stats")
    g.add_argument("--max-tuples", type=int, default=None)
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--timings", action="store_true", help="include wall-clock timings in the stats")
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("detect", help="search for a Berge theta")
    d.add_argument("input")
    d.add_argument("-k", type=int, required=True)
    d.add_argument("-t", type=int, required=True)
    d.add_argument("--oracle", action="store_true", help="cross-check with the brute-force oracle")
    d.add_argument("--node-budget", type=int, default=None)
    d.set_defaults(func=cmd_detect)

    r = sub.add_parser("reduce", help="greedy m-set reduction")
    r.add_argument("input")
    r.add_argument("-m", type=int, required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--tie-break", choices=reduction.TIE_BREAKS, default="lex")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("-k", type=int, default=None, help="with -t, print the multiplicity bound")
    r.add_argument("-t", type=int, default=None)
    r.set_defaults(func=cmd_reduce)

    c = sub.add_parser("census", help="per-pair Berge path counts")
    c.add_argument("input")
    c.add_argument("-k", type=int, required=True)
    c.add_argument("--cap", type=int, default=None)
    c.add_argument("--scope", choices=("all", "cross"), default="all")
    c.add_argument("--sample", type=int, default=None)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--threshold", type=int, default=None, help="also list bad pairs")
    c.add_argument("--out", default=None, help="JSON output (default stdout)")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--timings", action="store_true")
    c.set_defaults(func=cmd_census)

    f = sub.add_parser("repair", help="delete edges until no pair is bad")
    f.add_argument("input")
    f.add_argument("-k", type=int, required=True)
    f.add_argument("--threshold", type=int, default=None, help="default: pilot value for (k, r)")
    f.add_argument("--out", required=True)
    f.add_argument("--log", default=None, help="JSON repair log")
    f.add_argument("--certify", action="store_true", help="report the smallest t with no theta")
    f.add_argument("--node-budget", type=int, default=None)
    f.add_argument("--workers", type=int, default=1)
    f.add_argument("--timings", action="store_true")
    f.set_defaults(func=cmd_repair)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
