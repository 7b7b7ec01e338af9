"""Command-line front end.

Subcommands: minrank, census, alpha, construct, counterexample, verify-paper.
Usage problems exit with status 2, failed verifications with status 1.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from fractions import Fraction

from . import __version__
from .errors import FieldError, GraphFormatError, MinRankError, VerificationFailed
from .field import parse_field
from .graph import emit_edge_list, emit_graph6, parse_edge_list, parse_graph6

SCHEMA = "gfminrank.report/1"

CONSTRUCTIONS = ("nonprime", "k-minus-3", "large-prime")


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _load_graph(args):
    try:
        if args.graph6 is not None:
            return parse_graph6(args.graph6.strip())
        with open(args.graph) as fh:
            return parse_edge_list(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read graph: {exc}") from exc
    except GraphFormatError as exc:
        raise UsageError(f"bad graph: {exc}") from exc


def _field(text):
    try:
        return parse_field(text)
    except (FieldError, ValueError) as exc:
        raise UsageError(f"bad field {text!r}: {exc}") from exc


def _digest(g):
    return hashlib.sha256(emit_graph6(g).encode()).hexdigest()[:16]


def _emit(path, A):
    if path:
        with open(path, "w") as fh:
            fh.write(A.to_text())


# --- subcommands -------------------------------------------------------------


def cmd_minrank(args):
    from .minrank import minrank
    g = _load_graph(args)
    fs = _field(args.field)
    res = minrank(g, fs, method=args.method, max_rank=args.max_rank,
                  cross_check=args.cross_check, max_nodes=args.max_nodes, threads=args.threads)
    if res.witness is not None:
        _emit(args.emit_matrix, res.witness)
    inputs = {"graph6": emit_graph6(g), "graph_digest": _digest(g), "n": g.n, "field": fs.name,
              "method": args.method, "max_rank": args.max_rank}
    outputs = res.to_dict()
    if args.json:
        return 0, inputs, outputs
    if res.mr is None:
        print(f"no witness of rank <= {args.max_rank}; mr > {args.max_rank}")
    else:
        print(f"mr(F_{fs.q}, G) = {res.mr}   method {res.method}   nodes {res.nodes}")
        if res.lower is not None:
            print(f"lower bound: rank <= {res.lower.r} exhausted ({res.lower.nodes} nodes)")
        if "cross_check" in res.extra:
            print("cross-check against exhaustive search: agree")
        if res.witness is not None:
            print("witness:")
            print(str(res.witness))
    return 0, inputs, outputs


def cmd_census(args):
    from .census import census
    rep = census(args.n, brute=args.brute)
    if not args.json:
        print(rep.table())
    code = 0 if rep.consistent else 1
    return code, {"n": args.n, "brute": args.brute}, rep.to_dict()


def cmd_alpha(args):
    from .census import alpha_exact, alpha_montecarlo
    if args.exact:
        rep = alpha_exact(args.n, threads=args.threads)
    else:
        rep = alpha_montecarlo(args.n, args.samples, args.seed, threads=args.threads)
    if not args.json:
        if args.exact:
            print(f"alpha_{args.n}(F_2) = {rep.alpha} = {float(rep.alpha):.6f} "
                  f"({rep.samples} graphs)")
        else:
            print(f"alpha_{args.n}(F_2) ~ {rep.alpha:.6f} +- {rep.stderr:.6f} "
                  f"({rep.samples} samples, seed {rep.seed})")
        for k, v in sorted(rep.mr_histogram.items()):
            print(f"  mr = {k:>2}: {v}")
    inputs = {"n": args.n, "exact": args.exact, "samples": args.samples, "seed": args.seed}
    return 0, inputs, rep.to_dict()


def cmd_construct(args):
    from . import construct as C
    from .linalg import rank
    g = _load_graph(args)
    fs = _field(args.field)
    outputs = {}
    if args.construction == "nonprime":
        if args.k is None:
            raise UsageError("--k is required for the nonprime construction")
        A = C.nonprime_construction(g, args.k, fs)
    elif args.construction == "k-minus-3":
        d = C.k_n_minus_3_details(g, fs)
        A = d.matrix
        outputs.update({"case": d.case, "scalar": d.scalar, "delegated": d.delegated})
    else:
        if args.k is None:
            raise UsageError("--k is required for the large-prime construction")
        if fs.m != 1:
            raise UsageError("the large-prime construction needs a prime field")
        A = C.large_prime_construction(g, args.k, fs.p, seed=args.seed)
    _emit(args.emit_matrix, A)
    outputs.update({"rank": rank(A), "matrix": A.tolist()})
    inputs = {"graph6": emit_graph6(g), "graph_digest": _digest(g), "field": fs.name,
              "construction": args.construction, "k": args.k, "seed": args.seed}
    if not args.json:
        print(f"{args.construction} construction over F_{fs.q}: rank {outputs['rank']}")
        if "case" in outputs:
            print(f"case {outputs['case']}, scalar {outputs['scalar']}"
                  + (" (delegated to the non-prime construction)" if outputs["delegated"] else ""))
        print(str(A))
    return 0, inputs, outputs


def cmd_counterexample(args):
    from .construct import f3_counterexample_graph
    from .field import make_field
    from .minrank import EXHAUSTION, WITNESS, minrank, rank_le_search
    g = f3_counterexample_graph(args.n)
    outputs = {"graph6": emit_graph6(g), "edges": g.num_edges}
    code = 0
    if not args.json:
        print(f"graph on {g.n} vertices, {g.num_edges} edges, clique 1..{g.n - 2}")
        print(emit_edge_list(g), end="")
    if args.verify:
        F3 = make_field(3)
        low = rank_le_search(g, F3, 3, threads=args.threads)
        res = minrank(g, F3, method="search", threads=args.threads)
        outputs.update({"rank_le_3": low.to_dict(), "mr": res.mr,
                        "witness": res.certificate.to_dict()})
        if low.kind != EXHAUSTION or res.mr != 4 or res.certificate.kind != WITNESS:
            code = 1
        if not args.json:
            print(f"rank <= 3 over F_3: {low.kind} ({low.nodes} nodes)")
            print(f"mr(F_3, G) = {res.mr}")
    return code, {"n": args.n, "verify": args.verify}, outputs


def cmd_verify(args):
    from .checks import run_all
    results = run_all(only=args.only, threads=args.threads, seed=args.seed)
    if not args.json:
        for r in results:
            print(r.line())
    failed = [r for r in results if not r.passed]
    if failed and not args.json:
        print(f"first failing check: {failed[0].key}")
    outputs = {"checks": [r.to_dict() for r in results],
               "first_failure": failed[0].key if failed else None}
    return (1 if failed else 0), {"only": args.only, "seed": args.seed}, outputs


# --- parser ----------------------------------------------------------------------


def _add_graph(p, required=True):
    grp = p.add_mutually_exclusive_group(required=required)
    grp.add_argument("--graph", metavar="FILE", help="edge-list file ('n m' then 'u v' lines)")
    grp.add_argument("--graph6", metavar="STR", help="graph6 string")


def _add_common(p):
    p.add_argument("--json", action="store_true", help="print a structured report")
    p.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")


def build_parser():
    ap = argparse.ArgumentParser(prog="gfminrank",
                                 description="Minimum rank of graphs over finite fields.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("minrank", help="compute mr(F, G)")
    _add_graph(p)
    p.add_argument("--field", default="2", help="q or p^m (default 2)")
    p.add_argument("--method", default="auto", choices=["auto", "search", "f2", "exhaustive"])
    p.add_argument("--max-rank", type=int, default=None)
    p.add_argument("--max-nodes", type=int, default=10 ** 8)
    p.add_argument("--cross-check", action="store_true",
                   help="confirm against exhaustive enumeration")
    p.add_argument("--emit-matrix", metavar="PATH")
    _add_common(p)
    p.set_defaults(func=cmd_minrank)

    p = sub.add_parser("census", help="rank census of symmetric F_2 matrices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--brute", action="store_true", help="compare with enumeration (n <= 5)")
    _add_common(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("alpha", help="scaled average minimum rank over F_2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="enumerate all graphs (n <= 6)")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("construct", help="build a low-rank matrix for a graph with a clique")
    p.add_argument("--construction", required=True, choices=CONSTRUCTIONS)
    _add_graph(p)
    p.add_argument("--field", required=True, help="q or p^m")
    p.add_argument("--k", type=int, default=None, help="clique size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit-matrix", metavar="PATH")
    _add_common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("counterexample", help="graph with K_{n-2} and mr(F_3, G) = 4")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--verify", action="store_true", help="run the exhaustion search")
    _add_common(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify-paper", help="run every reproduction check")
    p.add_argument("--only", nargs="*", default=None, metavar="KEY")
    p.add_argument("--seed", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_verify)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "threads", 1) < 1:
        ap.error("--threads must be >= 1")
    if args.command == "verify-paper":
        from .checks import ACCEPTANCE_SEED, CHECKS
        if args.seed is None:
            args.seed = ACCEPTANCE_SEED
        unknown = [k for k in (args.only or []) if k not in CHECKS]
        if unknown:
            ap.error(f"unknown check(s) {unknown}; choose from {list(CHECKS)}")
    t0 = time.perf_counter()
    try:
        code, inputs, outputs = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except MinRankError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        report = {"schema": SCHEMA, "version": __version__, "subcommand": args.command,
                  "inputs": inputs, "outputs": outputs, "exit_code": code,
                  "seconds": round(time.perf_counter() - t0, 3)}
        print(json.dumps(_jsonable(report), indent=2, sort_keys=True))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
