from __future__ import annotations

import json
import random

import pytest

from c2gnn import __version__
from c2gnn.experiments import (
    SCHEMA,
    Report,
    all_digraphs,
    random_graph_pair,
    run_directed_counterexample,
    run_gnn_soundness,
    run_theorem1_check,
    run_undirected_counterexample,
)


def test_report_schema():
    rep = Report("demo", {"k": 1}, verdict_key="separated")
    rep.check("a", True)
    with rep.timed("stage"):
        pass
    rep.data["extra"] = [1, 2]
    out = rep.to_json()
    assert out["schema"] == SCHEMA and out["version"] == __version__
    assert out["separated"] is True and out["extra"] == [1, 2]
    assert set(out["timings_ms"]) == {"stage"}
    rep.check("b", False, {"why": "test"})
    assert not rep.ok and rep.to_json()["separated"] is False
    json.dumps(rep.to_json())


def test_all_digraphs_counts():
    assert [sum(1 for _ in all_digraphs(n)) for n in range(1, 4)] == [1, 4, 64]


@pytest.mark.parametrize("n,graphs,orders", [(1, 1, 1), (2, 4, 2), (3, 64, 6)])
def test_soundness_small(n, graphs, orders):
    rep = run_gnn_soundness(n)
    assert rep.ok
    assert rep.data["graphs_checked"] == graphs
    assert rep.data["linear_orders"] == orders
    assert rep.data["mismatch_count"] == 0 and rep.data["mismatches"] == []


def test_soundness_limits():
    with pytest.raises(ValueError):
        run_gnn_soundness(6)
    with pytest.raises(ValueError):
        run_gnn_soundness(0)


def test_directed_counterexample_details():
    rep = run_directed_counterexample(1, 1)
    out = rep.to_json()
    assert out["separated"] is True and out["num_nodes"] == 5
    names = [c["name"] for c in out["checks"]]
    assert "wl_colours_agree" in names and "middle_band_classes" in names
    bands = next(c for c in out["checks"] if c["name"] == "middle_band_classes")["detail"]
    assert bands[0]["middle_band"] == [0, 1, 2, 3, 4]
    assert bands[1]["middle_band"] == [1, 2, 3]


def test_undirected_counterexample_details():
    rep = run_undirected_counterexample(1, 1)
    out = rep.to_json()
    assert out["separated"] is True
    assert out["num_nodes"] == 5 + 2 * 10
    assert len(out["nine_cycle"]) == 9
    wl = next(c for c in out["checks"] if c["name"] == "wl_colours_agree")["detail"]
    assert wl["checked"] == {"v1": 5, "v2_v3": 20}


def test_parameter_validation():
    with pytest.raises(ValueError):
        run_directed_counterexample(0, 1)
    with pytest.raises(ValueError):
        run_undirected_counterexample(1, -1)
    with pytest.raises(ValueError):
        run_theorem1_check(1, 1, 0, 5, 0)


def test_theorem1_is_deterministic():
    a = run_theorem1_check(1, 1, 12, 20, seed=3, max_nodes=4).to_json()
    b = run_theorem1_check(1, 1, 12, 20, seed=3, max_nodes=4).to_json()
    a.pop("timings_ms"), b.pop("timings_ms")
    assert a == b
    assert a["passed"] is True
    assert a["distinct_pairs"] > 0 and a["equal_pairs"] > 0


def test_random_graph_pair_kinds():
    rng = random.Random(0)
    same_size = sum(
        ga.num_nodes == gb.num_nodes for ga, gb in (random_graph_pair(rng, 5, 2) for _ in range(60))
    )
    assert same_size > 30
