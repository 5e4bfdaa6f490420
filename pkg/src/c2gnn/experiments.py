"""Experiment pipelines producing JSON-ready reports."""

from __future__ import annotations

import random
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import product
from typing import Any

from . import __version__
from .corpus import (
    find_gadget_triangle,
    formula_phi_gadlin_fo,
    formula_phi_lin,
    make_perturbed_gadget,
    make_perturbed_order,
    mutate,
    order_half_size,
    single_edits,
)
from .gnn import gadlin_classifier, lin_classifier, run_classifier
from .graph import Graph, is_strict_linear_order
from .logic import Evaluator, GeneratorConfig, classify, metrics, random_formulas, to_text
from .wl import Distinguisher, partition, run_wl

SCHEMA = 1
MAX_SOUNDNESS_NODES = 5


@dataclass
class Report:
    command: str
    params: dict[str, Any]
    checks: list[dict[str, Any]] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)
    verdict_key: str = "passed"

    def check(self, name: str, ok: bool, detail: Any = None) -> bool:
        self.checks.append({"name": name, "pass": bool(ok), "detail": detail})
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks)

    @contextmanager
    def timed(self, stage: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings_ms[stage] = round((time.perf_counter() - t0) * 1000, 3)

    def to_json(self) -> dict[str, Any]:
        out = {
            "schema": SCHEMA,
            "command": self.command,
            "params": self.params,
            "version": __version__,
            self.verdict_key: self.ok,
            "checks": self.checks,
            "timings_ms": self.timings_ms,
        }
        out.update(self.data)
        return out


def _positive(*params: tuple[str, int]) -> None:
    for name, value in params:
        if not isinstance(value, int) or value < 1:
            raise ValueError(f"{name} must be a positive integer, got {value!r}")


def _first_mismatch(xs, ys):
    for i, (a, b) in enumerate(zip(xs, ys)):
        if a != b:
            return i
    return None


def _band(n: int, c: int, k: int) -> list[int]:
    """Node ids of ``v_{-(n-ck)} .. v_{n-ck}`` (empty once the band closes)."""
    half = n - c * k
    return list(range(n - half, n + half + 1)) if half >= 0 else []


def run_directed_counterexample(ell: int, c: int) -> Report:
    _positive(("ell", ell), ("c", c))
    rep = Report("experiment", {"mode": "directed", "ell": ell, "c": c}, verdict_key="separated")
    n = order_half_size(ell, c)
    with rep.timed("build"):
        g, g2 = make_perturbed_order(ell, c)
    rep.data["num_nodes"] = g.num_nodes
    with rep.timed("gnn"):
        model = lin_classifier()
        out_g, out_g2 = run_classifier(g, model), run_classifier(g2, model)
    rep.check("gnn_accepts_G", all(out_g), out_g)
    rep.check("gnn_rejects_G_prime", not any(out_g2), out_g2)
    with rep.timed("logic"):
        phi = formula_phi_lin()
        log_g, log_g2 = classify(g, phi), classify(g2, phi)
    rep.check("phi_lin_accepts_G", all(log_g), log_g)
    rep.check("phi_lin_rejects_G_prime", not any(log_g2), log_g2)
    rep.check(
        "reference_order_check",
        is_strict_linear_order(g) and not is_strict_linear_order(g2),
        None,
    )
    with rep.timed("wl"):
        a, b = run_wl([g, g2], c, ell)
    diff = [i for i in g.nodes if a.rounds[ell][i] != b.rounds[ell][i]]
    rep.check("wl_colours_agree", not diff, {"mismatched_nodes": diff})
    with rep.timed("distinguish"):
        dist = Distinguisher(a, b)
        found = [i for i in g.nodes if dist.formula(i, i, ell) is not None]
    rep.check("no_distinguishing_formula", not found, {"nodes": found})
    rounds = []
    bands_ok = True
    for k in range(ell + 1):
        part = partition(a.rounds[k])
        band = _band(n, c, k)
        if band:
            bands_ok &= band in part
        rounds.append({"round": k, "partition_sizes": [len(p) for p in part], "middle_band": band})
    rep.check("middle_band_classes", bands_ok, rounds)
    return rep


def run_undirected_counterexample(ell: int, c: int) -> Report:
    _positive(("ell", ell), ("c", c))
    rep = Report("experiment", {"mode": "undirected", "ell": ell, "c": c}, verdict_key="separated")
    with rep.timed("build"):
        h, h2 = make_perturbed_gadget(ell, c)
    rep.data["num_nodes"] = h.num_nodes
    with rep.timed("gnn"):
        model = gadlin_classifier()
        out_h, out_h2 = run_classifier(h, model), run_classifier(h2, model)
    rep.check("gnn_accepts_H", all(out_h), _first_mismatch(out_h, [True] * len(out_h)))
    rep.check("gnn_rejects_H_prime", not any(out_h2), _first_mismatch(out_h2, [False] * len(out_h2)))
    with rep.timed("logic"):
        phi = formula_phi_gadlin_fo()
        log_h, log_h2 = classify(h, phi), classify(h2, phi)
    rep.check("phi_gadlin_accepts_H", all(log_h), None)
    rep.check("phi_gadlin_rejects_H_prime", not any(log_h2), None)
    with rep.timed("witness"):
        cycle = find_gadget_triangle(h2)
        cycle_h = find_gadget_triangle(h)
    rep.check("nine_cycle_in_H_prime", cycle is not None and cycle_h is None, {"cycle": cycle})
    rep.data["nine_cycle"] = cycle
    with rep.timed("wl"):
        a, b = run_wl([h, h2], c, ell)
    diff = [i for i in h.nodes if a.rounds[ell][i] != b.rounds[ell][i]]
    order_nodes = 2 * order_half_size(ell, c) + 1
    rep.check(
        "wl_colours_agree",
        not diff,
        {
            "mismatched_nodes": diff,
            "checked": {"v1": order_nodes, "v2_v3": h.num_nodes - order_nodes},
        },
    )
    with rep.timed("distinguish"):
        dist = Distinguisher(a, b)
        found = [i for i in h.nodes if dist.formula(i, i, ell) is not None]
    rep.check("no_distinguishing_formula", not found, {"nodes": found})
    return rep


def all_digraphs(n: int):
    """Every loop-free digraph on nodes ``0..n-1`` (``2**(n*(n-1))`` of them)."""
    pairs = [(u, w) for u in range(n) for w in range(n) if u != w]
    for bits in product((False, True), repeat=len(pairs)):
        yield Graph.from_edges(n, [p for p, b in zip(pairs, bits) if b])


def run_gnn_soundness(max_nodes: int) -> Report:
    """Compare the order classifier with the definition on every digraph with ``max_nodes`` nodes."""
    _positive(("max_nodes", max_nodes))
    if max_nodes > MAX_SOUNDNESS_NODES:
        raise ValueError(f"max_nodes above {MAX_SOUNDNESS_NODES} is not enumerable at desk scale")
    rep = Report("soundness", {"max_nodes": max_nodes})
    model = lin_classifier()
    checked = orders = wrong = 0
    mismatches: list[dict] = []
    not_constant = 0
    with rep.timed("enumerate"):
        for g in all_digraphs(max_nodes):
            out = run_classifier(g, model)
            expected = is_strict_linear_order(g)
            checked += 1
            orders += expected
            if len(set(out)) > 1:
                not_constant += 1
            if any(o != expected for o in out):
                wrong += 1
                if len(mismatches) < 20:
                    mismatches.append({"edges": sorted(g.edges), "gnn": out, "expected": expected})
    rep.data.update(
        {
            "graphs_checked": checked,
            "linear_orders": orders,
            "mismatch_count": wrong,
            "mismatches": mismatches,
        }
    )
    rep.check("no_mismatches", wrong == 0, {"graphs_checked": checked, "linear_orders": orders})
    rep.check("constant_per_graph", not_constant == 0, {"non_constant_graphs": not_constant})
    return rep


def random_graph(rng: random.Random, max_nodes: int, dimension: int, p: float = 0.4) -> Graph:
    n = rng.randint(1, max_nodes)
    edges = [(u, w) for u in range(n) for w in range(n) if u != w and rng.random() < p]
    labels = [tuple(rng.randint(0, 1) for _ in range(dimension)) for _ in range(n)]
    return Graph.from_edges(n, edges, labels, dimension=dimension)


def random_graph_pair(rng: random.Random, max_nodes: int, max_dimension: int) -> tuple[Graph, Graph]:
    """A seeded pair: independent graphs, a permuted copy, or a one-edit mutant.

    Copies and mutants make equal colours across the pair common, so both
    directions of the colour/formula correspondence get exercised.
    """
    d = rng.randint(0, max_dimension)
    ga = random_graph(rng, max_nodes, d, rng.choice((0.2, 0.4, 0.6)))
    kind = rng.choice(("independent", "permuted", "mutant"))
    if kind == "independent":
        return ga, random_graph(rng, max_nodes, d, rng.choice((0.2, 0.4, 0.6)))
    if kind == "permuted":
        perm = list(ga.nodes)
        rng.shuffle(perm)
        return ga, ga.relabel(perm)
    edits = single_edits(ga)
    return ga, mutate(ga, rng.choice(edits)) if edits else ga


def run_theorem1_check(
    ell: int,
    c: int,
    graph_trials: int,
    formula_samples: int,
    seed: int,
    max_nodes: int = 6,
    dimension: int = 2,
) -> Report:
    """Distinguishers for differently coloured pairs; agreement on random
    formulas for equally coloured pairs."""
    _positive(("ell", ell), ("c", c), ("graph_trials", graph_trials), ("formula_samples", formula_samples))
    rep = Report(
        "theorem1",
        {
            "ell": ell,
            "c": c,
            "graph_trials": graph_trials,
            "formula_samples": formula_samples,
            "seed": seed,
            "max_nodes": max_nodes,
            "dimension": dimension,
        },
    )
    rng = random.Random(seed)
    config = GeneratorConfig(depth=ell, rank=c, dimension=dimension, free=("x",))
    formulas = random_formulas(config, formula_samples, seed)
    bounds_ok = [m for m in (metrics(f) for f in formulas) if m.depth > ell or m.counting_rank > c]
    rep.check("sample_within_bounds", not bounds_ok, {"violations": len(bounds_ok)})
    distinct = equal = 0
    failures: list[dict] = []
    with rep.timed("check"):
        for trial in range(graph_trials):
            ga, gb = random_graph_pair(rng, max_nodes, dimension)
            a, b = run_wl([ga, gb], c, ell)
            dist = Distinguisher(a, b)
            ev_a, ev_b = Evaluator(ga), Evaluator(gb)
            for u in ga.nodes:
                for v in gb.nodes:
                    f = dist.formula(u, v, ell)
                    if f is not None:
                        distinct += 1
                        m = metrics(f)
                        ok = (
                            m.is_c2
                            and m.depth <= ell
                            and m.counting_rank <= c
                            and ev_a.evaluate(f, {"x": u})
                            and not ev_b.evaluate(f, {"x": v})
                        )
                        if not ok and len(failures) < 10:
                            failures.append({"trial": trial, "u": u, "v": v, "formula": to_text(f)})
                    else:
                        equal += 1
                        for k, phi in enumerate(formulas):
                            if ev_a.evaluate(phi, {"x": u}) != ev_b.evaluate(phi, {"x": v}):
                                if len(failures) < 10:
                                    failures.append(
                                        {"trial": trial, "u": u, "v": v, "formula": to_text(phi)}
                                    )
                                break
    rep.data.update({"distinct_pairs": distinct, "equal_pairs": equal, "failures": failures})
    rep.check("theorem1_pairs", not failures, {"distinct_pairs": distinct, "equal_pairs": equal})
    return rep
