from __future__ import annotations

import random
from itertools import product

import pytest

from c2gnn.corpus import (
    formula_phi_3,
    formula_phi_4,
    formula_phi_gadlin_fo,
    formula_phi_lin,
    gadgetise,
    make_linear_order,
    make_perturbed_order,
)
from c2gnn.experiments import random_graph
from c2gnn.graph import Graph, GraphError
from c2gnn.logic import (
    CountExists,
    CountExistsExact,
    Edge,
    Evaluator,
    Exists,
    Forall,
    FormulaError,
    GeneratorConfig,
    Not,
    classify,
    desugar,
    evaluate,
    evaluate_naive,
    parse_formula,
    random_formulas,
)


def _graphs(seed: int, count: int, max_nodes: int = 4, dimension: int = 2) -> list[Graph]:
    rng = random.Random(seed)
    return [random_graph(rng, max_nodes, dimension) for _ in range(count)]


def test_counting_examples():
    f = parse_formula("exists[2] x. x = x")
    assert evaluate(Graph(3), f)
    assert not evaluate(Graph(1), f)
    gad2 = gadgetise(make_linear_order(2))
    assert evaluate(gad2, parse_formula("exists[=2] x. P1(x)"))


def test_phi_lin_examples():
    g, g2 = make_perturbed_order(2, 2)
    assert evaluate(g, formula_phi_lin(), {"x": 0})
    assert not evaluate(g2, formula_phi_lin(), {"x": 0})
    assert evaluate(Graph(1), formula_phi_lin(), {"x": 0})
    assert classify(make_linear_order(4), formula_phi_lin()) == [True] * 4
    cycle = Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert classify(cycle, formula_phi_lin()) == [False] * 3


def test_classify_identity_formula():
    assert classify(make_linear_order(3), parse_formula("x = x")) == [True] * 3


def test_errors():
    g = Graph(2)
    with pytest.raises(FormulaError):
        evaluate(g, parse_formula("E(x,y)"), {"x": 0})
    with pytest.raises(FormulaError):
        evaluate_naive(g, parse_formula("E(x,y)"), {"x": 0})
    with pytest.raises(GraphError):
        evaluate(g, parse_formula("x = x"), {"x": 5})
    with pytest.raises(FormulaError):
        classify(g, parse_formula("E(x,y)"))
    with pytest.raises(FormulaError):
        classify(g, parse_formula("exists x. x = x"))


def test_missing_predicates_are_false():
    assert not evaluate(Graph(2), parse_formula("exists x. P3(x)"))
    assert evaluate(Graph(2), parse_formula("forall x. ~P1(x)"))


def test_compiled_matches_naive_on_random_c2():
    config = GeneratorConfig(depth=3, rank=3, dimension=2, free=("x", "y"))
    formulas = random_formulas(config, 120, seed=17)
    for g in _graphs(3, 15):
        ev = Evaluator(g)
        for f in formulas:
            for u, v in product(g.nodes, repeat=2):
                env = {"x": u, "y": v}
                assert ev.evaluate(f, env) == evaluate_naive(g, f, env)


def test_compiled_matches_naive_with_three_variables():
    config = GeneratorConfig(depth=3, rank=2, dimension=1, free=("x",), variables=("x", "y", "z"))
    formulas = random_formulas(config, 120, seed=23)
    for g in _graphs(4, 12, dimension=1):
        ev = Evaluator(g)
        for f in formulas:
            for u in g.nodes:
                assert ev.evaluate(f, {"x": u}) == evaluate_naive(g, f, {"x": u})


@pytest.mark.parametrize("factory", [formula_phi_lin, formula_phi_3, formula_phi_4])
def test_multivariable_formulas_match_naive(factory):
    f = factory()
    # Naive evaluation of the depth-9 formulas is exponential; keep graphs tiny.
    small = [gadgetise(make_linear_order(2))] + _graphs(8, 6, max_nodes=3, dimension=3)
    for g in small:
        assert evaluate(g, f, {"x": 0}) == evaluate_naive(g, f, {"x": 0})


def test_exact_count_matches_direct_count():
    for g in _graphs(11, 25, max_nodes=6):
        ev = Evaluator(g)
        for k in range(6):
            f = CountExistsExact(k, "y", Edge("x", "y"))
            g_ = parse_formula(f"exists[={k}] y. (P1(y) & ~E(y,x))")
            for u in g.nodes:
                assert ev.evaluate(f, {"x": u}) == (len(g.out_sets[u]) == k)
                direct = sum(1 for w in g.nodes if g.has_pred(1, w) and (w, u) not in g.edges)
                assert ev.evaluate(g_, {"x": u}) == (direct == k)


def test_desugaring_agrees_with_direct_semantics():
    body = parse_formula("E(x,y) | P1(y)")
    cases = [
        (Forall("y", body), Not(CountExists(1, "y", Not(body)))),
        (Exists("y", body), CountExists(1, "y", body)),
    ]
    config = GeneratorConfig(depth=2, rank=2, dimension=2, free=("x",))
    for f in random_formulas(config, 60, seed=31):
        cases.append((f, desugar(f)))
    for g in _graphs(5, 15):
        for sugared, core in cases:
            for u in g.nodes:
                assert evaluate_naive(g, sugared, {"x": u}) == evaluate_naive(g, core, {"x": u})


def test_evaluator_reuses_memo_across_nodes():
    h = gadgetise(make_linear_order(5))
    ev = Evaluator(h)
    f = formula_phi_gadlin_fo()
    assert all(ev.evaluate(f, {"x": v}) for v in h.nodes)
    size = len(ev._memo)
    ev.evaluate(f, {"x": 0})
    assert len(ev._memo) == size
