from __future__ import annotations

from itertools import product

import pytest

from c2gnn.experiments import all_digraphs
from c2gnn.logic import (
    Eq,
    Evaluator,
    FormulaError,
    GeneratorConfig,
    Not,
    RelationKind,
    free_vars,
    metrics,
    normalize_c2,
    parse_formula,
    random_formulas,
)
from c2gnn.logic.normal_form import UNSATISFIABLE, relation_formula

XX, YY = Eq("x", "x"), Eq("y", "y")


def _equivalent_on_small_digraphs(f, g, max_nodes=3):
    for n in range(1, max_nodes + 1):
        for graph in all_digraphs(n):
            ev = Evaluator(graph)
            for u, v in product(graph.nodes, repeat=2):
                env = {"x": u, "y": v}
                if ev.evaluate(f, env) != ev.evaluate(g, env):
                    return False
    return True


def test_edge_atom():
    f = parse_formula("E(x,y)")
    nf = normalize_c2(f)
    kinds = {d.gamma for d in nf.disjuncts}
    assert kinds == {RelationKind.ONLY_FORWARD, RelationKind.BOTH_EDGES}
    assert all(d.alpha == XX and d.beta == YY for d in nf.disjuncts)
    assert _equivalent_on_small_digraphs(f, nf.to_formula(), max_nodes=4)


def test_equality_atom():
    nf = normalize_c2(parse_formula("x = y"))
    assert [d.gamma for d in nf.disjuncts] == [RelationKind.EQUAL]


def test_contradiction_gives_canonical_disjunct():
    nf = normalize_c2(parse_formula("E(x,y) & ~E(x,y)"))
    assert nf.disjuncts == (UNSATISFIABLE,)
    assert UNSATISFIABLE.alpha == Not(XX) and UNSATISFIABLE.beta == Not(YY)


def test_relation_kinds_are_exclusive_and_exhaustive():
    kinds = list(RelationKind)
    for n in range(1, 4):
        for graph in all_digraphs(n):
            ev = Evaluator(graph)
            for u, v in product(graph.nodes, repeat=2):
                hits = [k for k in kinds if ev.evaluate(relation_formula(k), {"x": u, "y": v})]
                assert len(hits) == 1


def test_parts_have_the_right_free_variables():
    config = GeneratorConfig(depth=2, rank=2, dimension=2, free=("x", "y"))
    for f in random_formulas(config, 100, seed=8):
        for d in normalize_c2(f).disjuncts:
            assert free_vars(d.alpha) <= {"x"}
            assert free_vars(d.beta) <= {"y"}


def test_sentences_are_anchored_to_x():
    nf = normalize_c2(parse_formula("exists x. P1(x)"))
    assert all(free_vars(d.alpha) == {"x"} for d in nf.disjuncts)


def test_equivalence_and_metrics_on_random_formulas():
    config = GeneratorConfig(depth=2, rank=2, dimension=1, free=("x", "y"))
    for f in random_formulas(config, 40, seed=12):
        nf = normalize_c2(f).to_formula()
        assert metrics(nf).depth <= metrics(f).depth
        assert metrics(nf).counting_rank <= metrics(f).counting_rank
        assert _equivalent_on_small_digraphs(f, nf, max_nodes=2)


def test_no_duplicate_disjuncts():
    nf = normalize_c2(parse_formula("E(x,y) | E(x,y) | (E(x,y) & E(x,y))"))
    assert len(nf.disjuncts) == len(set(nf.disjuncts)) == 2


def test_errors():
    with pytest.raises(FormulaError):
        normalize_c2(parse_formula("exists z. E(x,z)"))
    with pytest.raises(FormulaError):
        normalize_c2(parse_formula("(E(x,y) | P1(x)) & (E(y,x) | P2(y))"), cap=1)
