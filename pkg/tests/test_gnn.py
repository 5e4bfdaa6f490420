from __future__ import annotations

import random

import pytest

from c2gnn.corpus import (
    AddEdge,
    gadgetise,
    make_linear_order,
    make_perturbed_gadget,
    make_perturbed_order,
    mutate,
)
from c2gnn.experiments import random_graph
from c2gnn.graph import Graph, is_strict_linear_order
from c2gnn.gnn import (
    Fn,
    GnnClassifier,
    GnnError,
    Layer,
    apply_layer,
    check_psi,
    concat_classifiers,
    gadlin_classifier,
    identity_layer,
    lin_classifier,
    phi1_classifier,
    phi2_classifier,
    psi_classifier,
    render_state,
    run_classifier,
    run_layers,
    trace,
)


def test_identity_layer():
    g = Graph(3, 1, ((1,), (0,), (1,)))
    states = [tuple(lab) for lab in g.labels]
    assert apply_layer(g, states, identity_layer(1)) == states


def test_lin_layers_on_order():
    rows = run_layers(make_linear_order(4), lin_classifier())
    assert rows[1] == [(1,), (10,), (100,), (1000,)]
    assert rows[2] == [(1, 0), (10, 1), (100, 11), (1000, 111)]
    assert rows[3] == [(1,)] * 4


def test_lin_single_node_and_empty_graph():
    assert run_classifier(Graph(1), lin_classifier()) == [True]
    assert run_classifier(Graph(2), lin_classifier()) == [False, False]


@pytest.mark.parametrize("ell,c", [(1, 1), (2, 2)])
def test_lin_on_perturbed_orders(ell, c):
    g, g2 = make_perturbed_order(ell, c)
    assert all(run_classifier(g, lin_classifier()))
    assert not any(run_classifier(g2, lin_classifier()))


def test_lin_agrees_with_reference_on_random_digraphs():
    rng = random.Random(2)
    for _ in range(300):
        g = random_graph(rng, 6, 0, p=rng.choice([0.3, 0.5, 0.9]))
        out = run_classifier(g, lin_classifier())
        assert len(set(out)) == 1
        assert out[0] == is_strict_linear_order(g)


def test_gadlin_position_four_on_gad_l4():
    rows = trace(gadgetise(make_linear_order(4)), gadlin_classifier())
    assert rows[0]["layer"] == 0 and "functions" not in rows[0]
    # Shared labels, one flag each from phi1 and phi2, then psi's position 4.
    pos4 = 3 + 1 + 1
    first = rows[1]["states"]
    assert {s[pos4] for s in first[:4]} == {1, 10, 100, 1000}
    assert all(s[pos4] == 0 for s in first[4:])


def test_render_state():
    assert render_state((5, 6, 3), (1, 2)) == [5, 110, 11]
    assert render_state((0,), (0,)) == [0]


@pytest.mark.parametrize("ell,c", [(1, 1), (1, 2)])
def test_gadlin_on_perturbed_gadgets(ell, c):
    h, h2 = make_perturbed_gadget(ell, c)
    assert all(run_classifier(h, gadlin_classifier()))
    assert not any(run_classifier(h2, gadlin_classifier()))
    assert check_psi(h) and not check_psi(h2)


def test_check_psi_examples():
    for n in range(1, 6):
        assert check_psi(gadgetise(make_linear_order(n)))
    cycle = gadgetise(Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)]))
    assert not check_psi(cycle)
    with pytest.raises(GnnError):
        check_psi(make_linear_order(2))


def test_psi_agrees_with_direct_check():
    rng = random.Random(9)
    for _ in range(200):
        g = random_graph(rng, 5, 0, p=0.5)
        h = gadgetise(g)
        assert set(run_classifier(h, psi_classifier())) == {check_psi(h)}


def test_phi_sub_classifiers():
    h = gadgetise(make_linear_order(3))
    assert all(run_classifier(h, phi1_classifier()))
    assert all(run_classifier(h, phi2_classifier()))
    clash = mutate(h, AddEdge(0, 1))
    assert not any(run_classifier(clash, phi2_classifier()))
    assert all(run_classifier(clash, phi1_classifier()))


def test_equivariance_under_permutations():
    rng = random.Random(4)
    for model, g in [
        (lin_classifier(), make_linear_order(5)),
        (lin_classifier(), random_graph(rng, 6, 0)),
        (gadlin_classifier(), gadgetise(make_linear_order(3))),
        (gadlin_classifier(), make_perturbed_gadget(1, 1)[1]),
    ]:
        base = run_layers(g, model)
        for _ in range(10):
            perm = list(g.nodes)
            rng.shuffle(perm)
            other = run_layers(g.relabel(perm), model)
            for before, after in zip(base, other):
                assert [after[perm[v]] for v in g.nodes] == before


def test_input_checks():
    with pytest.raises(GnnError):
        run_classifier(Graph(2, 1, ((0,), (0,))), lin_classifier())
    with pytest.raises(GnnError):
        run_classifier(make_linear_order(3), gadlin_classifier())
    directed = Graph.from_edges(2, [(0, 1)], [(1, 0, 0), (0, 1, 0)], dimension=3)
    with pytest.raises(GnnError):
        run_classifier(directed, gadlin_classifier())


def test_width_checks():
    keep = Fn("keep", lambda s, a, r: s)
    with pytest.raises(GnnError):
        GnnClassifier("bad", (Layer(2, 2, keep),), Fn("t", lambda s: True), 1)
    with pytest.raises(GnnError):
        GnnClassifier("bad", (Layer(1, 1, keep, directed=True),), Fn("t", lambda s: True), 1)
    with pytest.raises(GnnError):
        Layer(1, 1, keep, agg=Fn("n", len), directed=True)
    with pytest.raises(GnnError):
        Layer(1, 1, keep, agg_in=Fn("n", len))
    wrong = Layer(1, 2, keep)
    with pytest.raises(GnnError):
        apply_layer(Graph(1, 1, ((0,),)), [(0,)], wrong)
    with pytest.raises(GnnError):
        apply_layer(Graph(2, 1, ((0,), (0,))), [(0,)], identity_layer(1))


def test_concat_of_single_model_matches():
    h, h2 = make_perturbed_gadget(1, 1)
    solo = concat_classifiers("solo", [psi_classifier()])
    for g in (h, h2):
        assert run_classifier(g, solo) == run_classifier(g, psi_classifier())


def test_concat_errors():
    with pytest.raises(GnnError):
        concat_classifiers("none", [])
    with pytest.raises(GnnError):
        concat_classifiers("mixed", [lin_classifier(), psi_classifier()])


def test_gadlin_widths():
    model = gadlin_classifier()
    assert len(model.layers) == 5
    assert model.layers[-1].width_out == 3 + 1 + 1 + 3
