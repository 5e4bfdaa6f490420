"""The hand-built classifiers for strict linear orders and their gadgetisations."""

from __future__ import annotations

from functools import reduce

from ..corpus import gadget_edges
from ..graph import Graph
from .engine import Fn, GnnClassifier, GnnError, Layer, concat_classifiers

# -- strict linear orders (directed) -----------------------------------------


def _pow10_count(m):
    return 10 ** len(m)


def _sum_first(m):
    return sum(s[0] for s in m)


def _order_readout(m) -> bool:
    # (i) first components differ between any two occurrences;
    # (ii) (x1 - 1) / 9 == x2 for every state.
    firsts = [s[0] for s in m]
    return len(set(firsts)) == len(firsts) and all(s[0] - 1 == 9 * s[1] for s in m)


def lin_classifier() -> GnnClassifier:
    """Three directed layers; only in-neighbours are aggregated.

    After layer 1 a node holds ``10**indeg``; after layer 2 also the sum of
    its in-neighbours' values, which on an order is the numeral ``1...1``
    with ``indeg`` ones. Layer 3's readout accepts iff all first components
    differ and every state satisfies ``(x1 - 1) / 9 == x2``.
    """
    l1 = Layer(
        0,
        1,
        Fn("set", lambda s, a, r: (a[0],)),
        agg_in=Fn("pow10_count", _pow10_count),
        directed=True,
    )
    l2 = Layer(
        1,
        2,
        Fn("append", lambda s, a, r: (s[0], a[0])),
        agg_in=Fn("sum", _sum_first, (1,)),
        directed=True,
    )
    l3 = Layer(
        2,
        1,
        Fn("indicator", lambda s, a, r: (1 if r else 0,)),
        read=Fn("distinct_first_and_repunit", _order_readout),
        directed=True,
    )
    return GnnClassifier("lin", (l1, l2, l3), Fn("equals", lambda s: s[0] == 1, (1,)), 0, True)


# -- gadgetised orders (undirected, labels P1, P2, P3) -------------------------


def _keep(s, pos, value):
    out = list(s)
    out[pos] = value
    return tuple(out)


def _or(values) -> int:
    return reduce(lambda a, b: a | b, values, 0)


def _or_where(label: int, pos: int):
    return Fn(
        "or_where_label",
        lambda m: _or(s[pos] for s in m if s[label]),
        (f"P{label + 1}", pos + 1),
    )


def _store_if(label: int, pos: int):
    return Fn(
        "store_if_label",
        lambda s, a, r: _keep(s, pos, a[0]) if s[label] else s,
        (f"P{label + 1}", pos + 1),
    )


def _psi_readout(m) -> bool:
    p1 = sum(1 for s in m if s[0])
    # For each position-4 value, the union of position-5 bits seen with it.
    seen: dict[int, int] = {}
    for s in m:
        seen[s[3]] = seen.get(s[3], 0) | s[4]
    return all(
        (seen.get(1 << j, 0) >> i) & 1 for j in range(p1) for i in range(j)
    )


def psi_classifier() -> GnnClassifier:
    """Five layers; positions 4 and 5 hold base-10 binary numerals as bit sets.

    1. P1 nodes store ``10**N2`` (``N2`` = number of P2 neighbours) at position 4.
    2. P3 nodes store the OR of position 4 over their P1 neighbours at position 5.
    3. P2 nodes store the OR of position 5 over their P3 neighbours at position 5.
    4. P1 nodes store the OR of position 5 over their P2 neighbours at position 5.
    5. Readout: for all ``i < j < |P1|`` some node has ``10**j`` at position 4
       and bit ``i`` set at position 5.
    """
    bits = (3, 4)
    l1 = Layer(
        3,
        5,
        Fn("store_if_label", lambda s, a, r: (*s, a[0] if s[0] else 0, 0), ("P1", 4)),
        agg=Fn("pow10_sum", lambda m: 1 << sum(s[1] for s in m), ("P2",)),
        bitset_positions=bits,
    )
    l2 = Layer(5, 5, _store_if(2, 4), agg=_or_where(0, 3), bitset_positions=bits)
    l3 = Layer(5, 5, _store_if(1, 4), agg=_or_where(2, 4), bitset_positions=bits)
    l4 = Layer(5, 5, _store_if(0, 4), agg=_or_where(1, 4), bitset_positions=bits)
    l5 = Layer(
        5,
        6,
        Fn("append_indicator", lambda s, a, r: (*s, 1 if r else 0)),
        read=Fn("gadget_order_check", _psi_readout),
        bitset_positions=bits,
    )
    return GnnClassifier("psi", (l1, l2, l3, l4, l5), Fn("equals", lambda s: s[5] == 1, (1,)), 3)


def _all_flags(m) -> bool:
    return all(s[3] for s in m)


def _global_and(name: str) -> Layer:
    return Layer(
        4,
        4,
        Fn("set_indicator", lambda s, a, r: (*s[:3], 1 if r else 0)),
        read=Fn(name, _all_flags),
    )


def phi1_classifier() -> GnnClassifier:
    """Every node carries exactly one of P1, P2, P3."""
    local = Layer(3, 4, Fn("one_label", lambda s, a, r: (*s, 1 if sum(s) == 1 else 0)))
    return GnnClassifier(
        "phi1", (local, _global_and("all_one_label")), Fn("equals", lambda s: s[3] == 1, (1,)), 3
    )


def _neighbour_counts(m):
    return (len(m), sum(s[0] for s in m), sum(s[1] for s in m), sum(s[2] for s in m))


def _phi2_local(s, a, r):
    deg, n1, n2, n3 = a[0]
    ok = (not s[1] or (deg == 2 and n1 == 1 and n3 == 1)) and (
        not s[2] or (deg == 2 and n1 == 1 and n2 == 1)
    ) and (not s[0] or n1 == 0)
    return (*s, 1 if ok else 0)


def phi2_classifier() -> GnnClassifier:
    """P2 and P3 nodes have degree 2 with one P1 neighbour and one of the other middle
    label; no two P1 nodes are adjacent."""
    local = Layer(
        3, 4, Fn("middle_degrees", _phi2_local), agg=Fn("count_by_label", _neighbour_counts)
    )
    return GnnClassifier(
        "phi2", (local, _global_and("all_degrees_ok")), Fn("equals", lambda s: s[3] == 1, (1,)), 3
    )


def gadlin_classifier() -> GnnClassifier:
    return concat_classifiers("gadlin", [phi1_classifier(), phi2_classifier(), psi_classifier()])


# -- direct check ------------------------------------------------------------


def count_p2_neighbours(g: Graph, v: int) -> int:
    return len(g.out_sets[v] & g.pred_sets[1])


def check_psi(g: Graph) -> bool:
    """For all ``i < j < |P1|`` some P1 node with ``j`` P2-neighbours has a
    gadgetised edge to a P1 node with ``i`` of them."""
    if g.dimension != 3:
        raise GnnError(f"check_psi needs dimension 3, got {g.dimension}")
    p1 = len(g.pred_sets[0])
    pairs = {
        (count_p2_neighbours(g, u), count_p2_neighbours(g, w)) for u, _, _, w in gadget_edges(g)
    }
    return all((j, i) in pairs for j in range(p1) for i in range(j))
