"""Command line front end: ``rrg <command> [options]``.

Exit codes: 0 completed, 2 input error, 3 inconclusive result or refused scope.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import counts
from .coloring import chromatic_number
from .enumerate import count_regular_by_edges, enumerate_regular
from .errors import InputError, SamplingError, ScopeError
from .experiments import (ExperimentSpec, run_concentration, run_extend_stress,
                          run_gamma_frequency, run_simple_rate, run_switch_ratio,
                          run_xti_check)
from .graph import load_graph, to_edgelist, to_json
from .pairing import sample_simple
from .structure import GammaConfig, gamma_report

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 2, 3


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def _emit(args, obj: dict, rows: list[dict] | None = None):
    if args.format == "csv":
        _write(_csv(rows if rows is not None else [obj]), args.out)
    else:
        _write(json.dumps(obj, indent=2, sort_keys=True) + "\n", args.out)


def _trial_rows(trials: dict) -> list[dict]:
    keys = [k for k, v in trials.items() if isinstance(v, list)]
    if not keys:
        return []
    length = len(trials[keys[0]])
    return [{k: trials[k][i] for k in keys if len(trials[k]) == length} for i in range(length)]


def _graph_from(args):
    if getattr(args, "graph", None):
        return load_graph(args.graph)
    if args.n is None or args.d is None:
        raise InputError("give --graph PATH or both --n and --d")
    g, _ = sample_simple(args.n, args.d, args.seed)
    return g


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise InputError(f"--{name.replace('_', '-')} is required")


# ----------------------------------------------------------------- commands


def cmd_sample(args) -> int:
    _need(args, "n", "d")
    g, stats = sample_simple(args.n, args.d, args.seed)
    if args.format == "edgelist":
        _write(to_edgelist(g), args.out)
    else:
        obj = to_json(g) | {"schema": 1, "seed": args.seed, "attempts": stats.attempts}
        _emit(args, obj, [{"u": u, "v": v} for u, v in g.edges()])
    return EXIT_OK


def cmd_chi(args) -> int:
    g = _graph_from(args)
    deadline = time.monotonic() + args.budget_ms / 1000 if args.budget_ms else None
    res = chromatic_number(g, args.budget, deadline)
    cert = res.certificate.to_json() if res.certificate else None
    obj = {"schema": 1, "n": g.n, "chi": res.chi, "lower": res.lower, "upper": res.upper,
           "certificate": cert}
    rows = [{"vertex": int(v), "color": c} for v, c in (cert or {}).items()]
    _emit(args, obj, rows)
    return EXIT_OK if res.resolved else EXIT_INCONCLUSIVE


def cmd_counts(args) -> int:
    _need(args, "n", "d", "t")
    report = counts.counts_report(args.n, args.d, args.t, tuple(args.delta))
    _emit(args, report, report["table"])
    return EXIT_OK


def cmd_gamma(args) -> int:
    if args.trials:
        _need(args, "n", "d")
        spec = ExperimentSpec("gamma-frequency", args.n, args.d, args.trials, args.seed,
                              {"samples": args.samples}, args.workers)
        res = run_gamma_frequency(spec)
        _emit(args, res.to_json(), _trial_rows(res.trials))
        return EXIT_OK
    g = _graph_from(args)
    rep = gamma_report(g, GammaConfig(samples2=args.samples, samples3=args.samples,
                                      seed=args.seed))
    rows = [{"id": r.id, "status": r.status, "scope": r.checked_scope} for r in rep.records]
    _emit(args, rep.to_json(), rows)
    return EXIT_INCONCLUSIVE if rep.holds is None else EXIT_OK


def _experiment(args, kind: str, runner, params=None) -> int:
    _need(args, "n", "d")
    spec = ExperimentSpec(kind, args.n, args.d, args.trials, args.seed, params or {},
                          args.workers, args.out, args.format)
    res = runner(spec)
    _emit(args, res.to_json(), _trial_rows(res.trials))
    return EXIT_OK if res.acceptable else EXIT_INCONCLUSIVE


def cmd_concentration(args) -> int:
    return _experiment(args, "concentration", run_concentration,
                       {"budget": args.budget, "budget_ms": args.budget_ms})


def cmd_simple_rate(args) -> int:
    return _experiment(args, "simple-rate", run_simple_rate)


def cmd_extend(args) -> int:
    params = {"mixed": args.mixed, "u0_size": args.u0}
    for key in ("t", "neighbor_threshold", "list_size", "prune_floor", "availability_floor",
                "retries"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    return _experiment(args, "extend-stress", run_extend_stress, params)


def cmd_xti(args) -> int:
    _need(args, "n", "d", "t")
    res = run_xti_check(args.n, args.d, args.t, args.trials, args.seed)
    rows = [{"k": k, "probability": p} for k, p in res.data.get("distribution", {}).items()]
    _emit(args, res.to_json(), rows or res.comparisons)
    return EXIT_OK


def cmd_switch_ratio(args) -> int:
    _need(args, "n", "d")
    res = run_switch_ratio(args.n, args.d, range(args.u), args.trials, args.seed)
    rows = [{k: v for k, v in c.items() if k != "params"} | {"i": c["params"]["i"]}
            for c in res.comparisons]
    _emit(args, res.to_json(), rows)
    return EXIT_OK if res.acceptable else EXIT_INCONCLUSIVE


def cmd_enumerate(args) -> int:
    _need(args, "n", "d")
    graphs = [g.edges() for g in enumerate_regular(args.n, args.d)] if args.list else None
    total = len(graphs) if graphs is not None else sum(1 for _ in enumerate_regular(args.n, args.d))
    obj = {"schema": 1, "n": args.n, "d": args.d, "count": total}
    if args.check:
        obj["independent_count"] = count_regular_by_edges(args.n, args.d)
    if graphs is not None:
        obj["graphs"] = graphs
    _emit(args, obj, [{"index": i, "edges": json.dumps(e)} for i, e in enumerate(graphs or [])]
          or [obj])
    return EXIT_OK


COMMANDS = {
    "sample": (cmd_sample, "draw a uniform simple d-regular graph"),
    "chi": (cmd_chi, "exact chromatic number with a certificate"),
    "counts": (cmd_counts, "exact internal-pair class sizes and tail bounds"),
    "gamma": (cmd_gamma, "structural property report (or frequencies with --trials)"),
    "concentration": (cmd_concentration, "chromatic number histogram over samples"),
    "simple-rate": (cmd_simple_rate, "fraction of simple pairings vs the asymptotic rate"),
    "xti": (cmd_xti, "internal-pair distribution with invariant checks"),
    "switch-ratio": (cmd_switch_ratio, "class-size ratios by e(U) vs switching bounds"),
    "extend": (cmd_extend, "stress the (t+1)-coloring extension pipeline"),
    "enumerate": (cmd_enumerate, "count (or list) labeled d-regular graphs"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--t", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-ms", type=float, default=None,
                        help="wall-clock cap per exact coloring decision")
    common.add_argument("--format", choices=("json", "csv", "edgelist"), default="json")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(prog="rrg", description="Random regular graph toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {name: sub.add_parser(name, parents=[common], help=text)
               for name, (_, text) in COMMANDS.items()}
    for name in ("chi", "gamma"):
        parsers[name].add_argument("--graph", metavar="PATH",
                                   help="edge list or JSON graph (default: sample one)")
    for name in ("chi", "concentration"):
        parsers[name].add_argument("--budget", type=int, default=1_000_000,
                                   help="search-node cap per decision")
    parsers["counts"].add_argument("--delta", type=float, nargs="+", default=[1, 2, 3])
    parsers["gamma"].add_argument("--samples", type=int, default=5000)
    parsers["switch-ratio"].add_argument("--u", type=int, default=4, help="|U|; U = {0..u-1}")
    ext = parsers["extend"]
    ext.add_argument("--u0", type=int, default=3, help="size of the uncolored set")
    ext.add_argument("--neighbor-threshold", type=int)
    ext.add_argument("--list-size", type=int)
    ext.add_argument("--prune-floor", type=int)
    ext.add_argument("--availability-floor", type=float)
    ext.add_argument("--retries", type=int)
    ext.add_argument("--mixed", action="store_true", help="draw parameters per trial")
    parsers["enumerate"].add_argument("--list", action="store_true", help="emit every graph")
    parsers["enumerate"].add_argument("--check", action="store_true",
                                      help="also count with the edge-branching enumerator")
    return parser


_TRIAL_DEFAULTS = {"concentration": 200, "simple-rate": 2000, "extend": 100}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.trials is None and args.command in _TRIAL_DEFAULTS:
        args.trials = _TRIAL_DEFAULTS[args.command]
    if args.format == "edgelist" and args.command != "sample":
        print("rrg: --format edgelist only applies to sample", file=sys.stderr)
        return EXIT_INPUT
    handler = COMMANDS[args.command][0]
    try:
        return handler(args)
    except (ScopeError, SamplingError) as exc:
        print(f"rrg: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (InputError, ValueError, OSError) as exc:
        print(f"rrg: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
