"""Command-line entry point: ``cutquery <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from ._util import derive_rng
from .adversary import build_adversary_pair
from .exceptions import CutQueryError, ParameterError, RecoveryFailure
from .experiments import ALGORITHMS, fit_exponent, run_on_graph, scale, summarize, write_csv
from .forest import test_empty_subgraph
from .graph import FAMILIES, WeightedGraph, format_graph, generate, read_graph, write_graph
from .oracles import OracleHandle
from .profiles import PROFILES

USAGE_EXIT = 1
FAILURE_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _query_list(text):
    """``"0,1;2"`` -> [[0, 1], [2]]; an empty group is the empty set."""
    if text is None or text == "":
        return []
    return [_int_list(part) for part in text.split(";")]


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", choices=sorted(PROFILES), default="paper")
    p.add_argument("--oracle", choices=["cut", "additive", "matrix"], default="cut")
    p.add_argument("--out", default=None, help="write the primary output here instead of stdout")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--audit", choices=["on", "off"], default="on")
    return p


def _graph_source(p, required_n=True):
    p.add_argument("--graph", default=None, help="read the hidden graph from a file")
    p.add_argument("--family", choices=FAMILIES, default="erdos_renyi")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--M", type=int, default=None)


def build_parser():
    common = _common()
    parser = _Parser(prog="cutquery", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="generate a graph file")
    _graph_source(g)

    lr = sub.add_parser("learn", parents=[common], help="learn the hidden graph")
    _graph_source(lr)
    lr.add_argument("--method", choices=["full", "degree", "edges"], default="full")
    lr.add_argument("--degree", type=int, default=None)
    lr.add_argument("--delta", type=float, default=0.1)
    lr.add_argument("--graph-out", default=None, help="also write the learned graph file here")

    for name in ("components", "forest", "bipartite", "acyclic"):
        sp = sub.add_parser(name, parents=[common], help=f"run the {name} algorithm")
        _graph_source(sp)

    et = sub.add_parser("empty-test", parents=[common], help="test that an induced subgraph is empty")
    _graph_source(et)
    et.add_argument("--subset", type=_int_list, default=None, help="vertices of S (default all)")
    et.add_argument("--eps", type=float, default=0.1)

    ad = sub.add_parser("adversary", parents=[common], help="build an indistinguishable graph pair")
    ad.add_argument("--n", type=int, required=True)
    ad.add_argument("--queries", default="", help='cut queries as "0,1;2;..."')

    sc = sub.add_parser("scale", parents=[common], help="sweep n and seeds, emit CSV")
    sc.add_argument("--algo", choices=ALGORITHMS, default="components")
    sc.add_argument("--family", choices=FAMILIES, default="erdos_renyi")
    sc.add_argument("--n", type=_int_list, required=True, help="comma-separated sizes")
    sc.add_argument("--trials", type=int, default=10)
    sc.add_argument("--jobs", type=int, default=1)
    return parser


def _load_graph(args):
    if args.graph is not None:
        return read_graph(args.graph), "custom"
    if args.n is None:
        raise ParameterError("give --graph FILE or --n")
    return generate(args.family, args.n, args.seed, p=args.p, d=args.d, M=args.M), args.family


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _dump(obj):
    return json.dumps(obj, sort_keys=True) + "\n"


def _report(record, args):
    if args.format == "csv":
        _emit(write_csv([record]), args.out)
    else:
        _emit(_dump(record.to_dict()), args.out)
    return FAILURE_EXIT if record.failure is not None else 0


def _cmd_gen(args):
    G, _ = _load_graph(args)
    _emit(format_graph(G), args.out)
    return 0


def _cmd_run(args):
    G, family = _load_graph(args)
    algo = args.command
    extra = {}
    if algo == "learn":
        extra = {"method": args.method, "degree": args.degree, "delta": args.delta, "M": args.M}
    record = run_on_graph(algo, G, args.seed, family=family, profile=args.profile,
                          oracle=args.oracle, audit=args.audit == "on", **extra)
    if algo == "learn" and args.graph_out and record.failure is None:
        learned = WeightedGraph(G.n, [tuple(e) for e in record.output["edges"]],
                                M=record.output["M"])
        write_graph(learned, args.graph_out)
    return _report(record, args)


def _cmd_empty(args):
    G, family = _load_graph(args)
    h = OracleHandle(G, args.oracle, audit=args.audit == "on",
                     audit_seed=derive_rng(args.seed, "audit"))
    S = range(G.n) if args.subset is None else args.subset
    empty = test_empty_subgraph(h, S, args.eps, rng=derive_rng(args.seed, "algorithm:empty-test"))
    out = {"empty": empty, "queries": h.ledger.to_dict(), "n": G.n, "family": family,
           "seed": args.seed}
    if args.audit == "on":
        Sset = set(S)
        out["correct"] = empty == (not any(u in Sset and v in Sset for u, v in G.edges()))
    _emit(_dump(out), args.out)
    return 0


def _cmd_adversary(args):
    queries = _query_list(args.queries)
    pair = build_adversary_pair(args.n, queries)
    cert = pair.certificate(queries)
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        write_graph(pair.G1, os.path.join(args.out, "G1.graph"))
        write_graph(pair.G2, os.path.join(args.out, "G2.graph"))
        with open(os.path.join(args.out, "certificate.json"), "w") as fh:
            fh.write(_dump(cert))
    else:
        sys.stdout.write(_dump({"certificate": cert, "G1": format_graph(pair.G1),
                                "G2": format_graph(pair.G2)}))
    return 0


def _cmd_scale(args):
    records = scale(args.algo, args.family, args.n, args.trials, seed=args.seed, jobs=args.jobs,
                    profile=args.profile, oracle=args.oracle, audit=args.audit == "on")
    if args.format == "csv":
        if args.out is None:
            sys.stdout.write(write_csv(records))
        else:
            write_csv(records, args.out)
    else:
        summ = summarize(records)
        ns = sorted(summ)
        out = {"summary": {str(n): v for n, v in summ.items()}}
        if len(ns) >= 2 and all(summ[n]["mean_cut"] > 0 for n in ns):
            out["cut_exponent"] = fit_exponent(ns, [summ[n]["mean_cut"] for n in ns])
        _emit(_dump(out), args.out)
    return 0


_COMMANDS = {"gen": _cmd_gen, "learn": _cmd_run, "components": _cmd_run, "forest": _cmd_run,
             "bipartite": _cmd_run, "acyclic": _cmd_run, "empty-test": _cmd_empty,
             "adversary": _cmd_adversary, "scale": _cmd_scale}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except RecoveryFailure as exc:
        sys.stdout.write(_dump({"status": "failure", **exc.report}))
        return FAILURE_EXIT
    except (CutQueryError, ValueError, OSError) as exc:
        sys.stderr.write(f"cutquery: error: {exc}\n")
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
