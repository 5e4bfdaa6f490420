from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from c2gnn.corpus import gadgetise, make_linear_order, make_perturbed_order
from c2gnn.experiments import all_digraphs
from c2gnn.graph import (
    Graph,
    GraphError,
    NeighborhoodKind,
    dumps,
    from_json,
    is_strict_linear_order,
    is_strict_linear_order_alt,
    is_undirected,
    loads,
    neighbors,
    read_graph,
    to_json,
    write_graph,
)


@st.composite
def digraphs(draw, max_nodes=6, max_dim=2):
    n = draw(st.integers(1, max_nodes))
    d = draw(st.integers(0, max_dim))
    pairs = [(u, w) for u in range(n) for w in range(n) if u != w]
    edges = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    labels = [tuple(draw(st.integers(0, 1)) for _ in range(d)) for _ in range(n)]
    return Graph.from_edges(n, edges, labels, dimension=d)


def test_neighbors_in_linear_order():
    l4 = make_linear_order(4)
    assert neighbors(l4, 0, NeighborhoodKind.IN) == ()
    assert neighbors(l4, 3, NeighborhoodKind.IN) == (0, 1, 2)
    assert neighbors(l4, 1, NeighborhoodKind.OUT) == (2, 3)
    assert neighbors(l4, 1, NeighborhoodKind.ANY) == (0, 2, 3)
    assert neighbors(l4, 1, NeighborhoodKind.NON_NEIGHBOR) == ()


def test_neighbors_out_of_range():
    with pytest.raises(GraphError):
        neighbors(make_linear_order(2), 2, NeighborhoodKind.IN)


@given(digraphs())
def test_cells_partition_nodes(g):
    cells = [NeighborhoodKind.BOTH, NeighborhoodKind.IN_ONLY, NeighborhoodKind.OUT_ONLY, NeighborhoodKind.NON_NEIGHBOR]
    for v in g.nodes:
        parts = [set(neighbors(g, v, k)) for k in cells] + [{v}]
        assert sum(len(p) for p in parts) == g.num_nodes
        assert set().union(*parts) == set(g.nodes)
        any_ = set(neighbors(g, v, NeighborhoodKind.ANY))
        assert any_ | set(neighbors(g, v, NeighborhoodKind.NON_NEIGHBOR)) | {v} == set(g.nodes)
        assert neighbors(g, v, NeighborhoodKind.IN) == tuple(sorted(u for u, w in g.edges if w == v))


def test_is_undirected():
    assert is_undirected(Graph(3))
    assert not is_undirected(make_linear_order(4))
    assert is_undirected(gadgetise(make_linear_order(4)))


def test_linear_order_examples():
    assert is_strict_linear_order(Graph(1))
    g, g2 = make_perturbed_order(2, 2)
    assert is_strict_linear_order(g) and not is_strict_linear_order(g2)
    cycle = Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert not is_strict_linear_order(cycle)
    assert is_strict_linear_order_alt(make_linear_order(5))
    assert is_strict_linear_order_alt(Graph(1))
    assert not is_strict_linear_order_alt(Graph(2))


def test_linear_order_definitions_agree():
    # Every 97th edge mask; the full sweep runs in the slow soundness tier.
    pairs = [(u, w) for u in range(5) for w in range(5) if u != w]
    for mask in range(0, 1 << len(pairs), 97):
        g = Graph.from_edges(5, [p for k, p in enumerate(pairs) if mask >> k & 1])
        assert is_strict_linear_order(g) == is_strict_linear_order_alt(g)
    for n in range(1, 4):
        for g in all_digraphs(n):
            assert is_strict_linear_order(g) == is_strict_linear_order_alt(g)


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 2)])
    with pytest.raises(GraphError):
        Graph(2, 1, ((1,), (2,)))
    with pytest.raises(GraphError):
        Graph(2, 2, ((1, 0),))
    with pytest.raises(GraphError):
        Graph(2, 0, (), frozenset({(0, 1)}), directed=False)


def test_predicates_beyond_dimension_are_false():
    g = Graph(1, 1, ((1,),))
    assert g.has_pred(1, 0)
    assert not g.has_pred(2, 0)


def test_relabel():
    g = Graph.from_edges(3, [(0, 1)], [(1,), (0,), (0,)])
    h = g.relabel([2, 0, 1])
    assert h.edges == frozenset({(2, 0)})
    assert h.labels == ((0,), (0,), (1,))
    with pytest.raises(GraphError):
        g.relabel([0, 0, 1])


def test_json_format():
    g = Graph.undirected(3, [(1, 0), (1, 2)], [(1,), (0,), (1,)])
    data = to_json(g)
    assert data == {
        "directed": False,
        "dimension": 1,
        "num_nodes": 3,
        "labels": [[1], [0], [1]],
        "edges": [[0, 1], [1, 2]],
    }
    assert from_json(data) == g


@settings(max_examples=50)
@given(digraphs())
def test_json_round_trip(g):
    text = dumps(g)
    assert loads(text) == g
    assert dumps(loads(text)) == text


def test_json_files(tmp_path):
    g = gadgetise(make_linear_order(3))
    path = tmp_path / "g.json"
    write_graph(g, path)
    assert read_graph(path) == g
    assert json.loads(path.read_text())["directed"] is False


def test_malformed_json():
    with pytest.raises(GraphError):
        from_json({"directed": True, "num_nodes": 2})
