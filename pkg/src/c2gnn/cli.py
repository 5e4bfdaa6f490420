"""Command-line interface.

Exit codes: 0 when every check passes, 1 when a scientific check fails,
2 on usage errors (bad flags, unreadable or malformed inputs).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any

from . import __version__
from .corpus import (
    gadgetise,
    make_linear_order,
    make_perturbed_gadget,
    make_perturbed_order,
)
from .experiments import (
    SCHEMA,
    run_directed_counterexample,
    run_gnn_soundness,
    run_theorem1_check,
    run_undirected_counterexample,
)
from .gnn import GnnError, gadlin_classifier, lin_classifier, run_classifier, trace
from .graph import GraphError, read_graph, to_json
from .logic import (
    Evaluator,
    FormulaError,
    free_vars,
    metrics,
    normalize_c2,
    parse_formula,
    to_text,
)
from .wl import ColorTableError, build_distinguishing_formula, partition_sizes, run_wl

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(payload: Any, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _formula(args) -> Any:
    if (args.formula is None) == (args.formula_file is None):
        raise UsageError("give exactly one of --formula and --formula-file")
    text = args.formula if args.formula is not None else Path(args.formula_file).read_text("utf-8")
    return parse_formula(text.strip())


def _meta(command: str, params: dict, started: float) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "params": params,
        "version": __version__,
        "timings_ms": {"total": round((time.perf_counter() - started) * 1000, 3)},
    }


# -- subcommands -------------------------------------------------------------


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "linear-order":
        graphs = {"graph": make_linear_order(args.n)}
    elif fam == "gadget-order":
        graphs = {"graph": gadgetise(make_linear_order(args.n))}
    elif fam == "gadgetise":
        if not args.input:
            raise UsageError("gadgetise needs --input")
        graphs = {"graph": gadgetise(read_graph(args.input))}
    elif fam in ("perturbed-order", "perturbed-gadget"):
        make = make_perturbed_order if fam == "perturbed-order" else make_perturbed_gadget
        g, g2 = make(args.ell, args.c)
        graphs = {"original": g, "perturbed": g2}
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown family {fam}")
    if args.which != "both":
        if args.which not in graphs:
            raise UsageError(f"--which {args.which} does not apply to {fam}")
        _emit(to_json(graphs[args.which]), args.out)
    elif len(graphs) == 1:
        _emit(to_json(next(iter(graphs.values()))), args.out)
    else:
        _emit({k: to_json(v) for k, v in graphs.items()}, args.out)
    return EXIT_OK


def cmd_wl(args) -> int:
    graphs = [read_graph(p) for p in args.graph]
    runs = run_wl(graphs, args.c, args.rounds)
    per_graph = [
        {"rounds": [{"colors": list(cols), "partition_sizes": partition_sizes(cols)} for cols in ca.rounds]}
        for ca in runs
    ]
    _emit(per_graph[0] if len(per_graph) == 1 else {"graphs": per_graph}, args.out)
    return EXIT_OK


MODELS = {"lin": lin_classifier, "gadlin": gadlin_classifier}


def cmd_gnn(args) -> int:
    g = read_graph(args.graph)
    model = MODELS[args.model]()
    payload: dict[str, Any] = {"model": args.model, "outputs": run_classifier(g, model)}
    if args.trace:
        payload["trace"] = trace(g, model)
    _emit(payload, args.out)
    return EXIT_OK


def _assignment(pairs: list[str]) -> dict[str, int]:
    out = {}
    for item in pairs:
        var, sep, val = item.partition("=")
        if not sep or not var or not val.isdigit():
            raise UsageError(f"bad assignment {item!r}; expected var=node")
        out[var] = int(val)
    return out


def cmd_eval(args) -> int:
    g = read_graph(args.graph)
    f = _formula(args)
    assign = _assignment(args.assign)
    ev = Evaluator(g)
    payload: dict[str, Any] = {"formula": to_text(f)}
    unassigned = sorted(free_vars(f) - assign.keys())
    if len(unassigned) == 1:
        (var,) = unassigned
        payload["variable"] = var
        payload["values"] = [ev.evaluate(f, {**assign, var: v}) for v in g.nodes]
    else:
        payload["value"] = ev.evaluate(f, assign)
    _emit(payload, args.out)
    return EXIT_OK


def cmd_normalize(args) -> int:
    f = _formula(args)
    nf = normalize_c2(f, cap=args.cap)
    m_in, m_out = metrics(f), metrics(nf.to_formula())
    _emit(
        {
            "input": to_text(f),
            "disjuncts": [
                {"alpha": to_text(d.alpha), "beta": to_text(d.beta), "gamma": d.gamma.value}
                for d in nf.disjuncts
            ],
            "formula": to_text(nf.to_formula()),
            "metrics": {
                "input": {"depth": m_in.depth, "rank": m_in.counting_rank},
                "output": {"depth": m_out.depth, "rank": m_out.counting_rank},
            },
        },
        args.out,
    )
    return EXIT_OK


def cmd_distinguish(args) -> int:
    ga, gb = read_graph(args.graph_a), read_graph(args.graph_b)
    f = build_distinguishing_formula(ga, args.node_a, gb, args.node_b, args.ell, args.c)
    payload: dict[str, Any] = {"formula": None}
    ok = True
    if f is not None:
        m = metrics(f)
        holds_a = Evaluator(ga).evaluate(f, {"x": args.node_a})
        holds_b = Evaluator(gb).evaluate(f, {"x": args.node_b})
        ok = holds_a and not holds_b and m.depth <= args.ell and m.counting_rank <= args.c
        payload = {
            "formula": to_text(f),
            "metrics": {"depth": m.depth, "rank": m.counting_rank, "is_c2": m.is_c2},
            "holds_at_a": holds_a,
            "holds_at_b": holds_b,
        }
    _emit(payload, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _report(rep, args) -> int:
    _emit(rep.to_json(), args.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_soundness(args) -> int:
    return _report(run_gnn_soundness(args.max_nodes), args)


def cmd_experiment(args) -> int:
    run = run_directed_counterexample if args.mode == "directed" else run_undirected_counterexample
    return _report(run(args.ell, args.c), args)


def cmd_theorem1(args) -> int:
    rep = run_theorem1_check(args.ell, args.c, args.graph_trials, args.formula_samples, args.seed)
    return _report(rep, args)


# -- parser ------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be at least 1")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"{value} must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="c2gnn",
        description="Bounded WL, counting-logic model checking and exact ACR-GNNs.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", help="write JSON here instead of stdout")
        sp.set_defaults(func=func)
        return sp

    def formula_args(sp) -> None:
        sp.add_argument("--formula", help="formula text")
        sp.add_argument("--formula-file", help="file holding the formula text")

    sp = add("gen", cmd_gen, "generate graphs")
    sp.add_argument(
        "family",
        choices=["linear-order", "gadget-order", "gadgetise", "perturbed-order", "perturbed-gadget"],
    )
    sp.add_argument("--n", type=_positive_int, default=4, help="order size")
    sp.add_argument("--ell", type=_positive_int, default=2)
    sp.add_argument("--c", type=_positive_int, default=2)
    sp.add_argument("--input", help="graph JSON to gadgetise")
    sp.add_argument("--which", choices=["both", "graph", "original", "perturbed"], default="both")

    sp = add("wl", cmd_wl, "run bounded WL and print colours per round")
    sp.add_argument("--graph", action="append", required=True, help="graph JSON (repeatable)")
    sp.add_argument("--c", type=_nonneg_int, required=True)
    sp.add_argument("--rounds", type=_nonneg_int, required=True)

    sp = add("gnn", cmd_gnn, "run a hand-built classifier")
    sp.add_argument("--model", choices=sorted(MODELS), required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--trace", action="store_true", help="include per-layer states")

    sp = add("eval", cmd_eval, "evaluate a formula on a graph")
    sp.add_argument("--graph", required=True)
    formula_args(sp)
    sp.add_argument("--assign", action="append", default=[], metavar="VAR=NODE")

    sp = add("normalize", cmd_normalize, "two-variable normal form")
    formula_args(sp)
    sp.add_argument("--cap", type=_positive_int, default=100_000)

    sp = add("distinguish", cmd_distinguish, "build a distinguishing formula")
    sp.add_argument("--graph-a", required=True)
    sp.add_argument("--node-a", type=_nonneg_int, required=True)
    sp.add_argument("--graph-b", required=True)
    sp.add_argument("--node-b", type=_nonneg_int, required=True)
    sp.add_argument("--ell", type=_nonneg_int, required=True)
    sp.add_argument("--c", type=_positive_int, required=True)

    sp = add("soundness", cmd_soundness, "exhaustive check of the order classifier")
    sp.add_argument("--max-nodes", type=_positive_int, default=4)

    sp = add("experiment", cmd_experiment, "run a separation experiment")
    sp.add_argument("--mode", choices=["directed", "undirected"], required=True)
    sp.add_argument("--ell", type=_positive_int, default=2)
    sp.add_argument("--c", type=_positive_int, default=2)

    sp = add("theorem1", cmd_theorem1, "sampled check of the colour/formula correspondence")
    sp.add_argument("--ell", type=_positive_int, default=1)
    sp.add_argument("--c", type=_positive_int, default=1)
    sp.add_argument("--graph-trials", type=_positive_int, default=50)
    sp.add_argument("--formula-samples", type=_positive_int, default=200)
    sp.add_argument("--seed", type=int, default=42)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphError, FormulaError, GnnError, ColorTableError, ValueError, OSError) as exc:
        print(f"c2gnn {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
