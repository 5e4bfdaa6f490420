"""Graph families, edit mutations and the named formula library.

Id conventions
--------------
* ``make_linear_order(m)``: node ``i`` precedes node ``j`` iff ``i < j``. With
  ``m = 2n+1`` node ``i`` stands for ``v_{i-n}``, so ``v_0`` is node ``n``.
* ``gadgetise(g)``: node ``u`` of ``g`` keeps id ``u`` (label ``(1,0,0)``);
  the ``k``-th edge of ``g`` in sorted order ``(u, w)`` gets the middle nodes
  ``n + 2k`` (label ``(0,1,0)``, adjacent to ``u``) and ``n + 2k + 1``
  (label ``(0,0,1)``, adjacent to ``w``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Union

from .graph import Graph, GraphError
from .logic.parser import parse_formula
from .logic.syntax import Formula, FormulaError, conj

# -- graph families ----------------------------------------------------------


def make_linear_order(num_nodes: int) -> Graph:
    if num_nodes < 1:
        raise GraphError("a linear order needs at least one node")
    edges = [(i, j) for i in range(num_nodes) for j in range(i + 1, num_nodes)]
    return Graph.from_edges(num_nodes, edges, dimension=0)


def _check_params(ell: int, c: int) -> None:
    if ell < 1 or c < 1:
        raise ValueError(f"ell and c must be at least 1, got ell={ell}, c={c}")


def order_half_size(ell: int, c: int) -> int:
    """``n = ell * c + 1``; the counterexample orders have ``2n + 1`` nodes."""
    _check_params(ell, c)
    return ell * c + 1


def make_perturbed_order(ell: int, c: int) -> tuple[Graph, Graph]:
    """The order ``G`` on ``v_{-n}..v_n`` and ``G'`` with the edge between ``v_{-1}`` and ``v_1`` reversed."""
    n = order_half_size(ell, c)
    g = make_linear_order(2 * n + 1)
    lo, hi = n - 1, n + 1
    edges = (set(g.edges) - {(lo, hi)}) | {(hi, lo)}
    return g, Graph.from_edges(g.num_nodes, edges, dimension=0)


P1_LABEL, P2_LABEL, P3_LABEL = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def gadget_nodes(g: Graph) -> dict[tuple[int, int], tuple[int, int]]:
    """Map each edge of ``g`` to the ids of its two middle gadget nodes."""
    n = g.num_nodes
    return {e: (n + 2 * k, n + 2 * k + 1) for k, e in enumerate(sorted(g.edges))}


def gadgetise(g: Graph) -> Graph:
    n = g.num_nodes
    mids = gadget_nodes(g)
    labels = [P1_LABEL] * n + [P2_LABEL, P3_LABEL] * len(mids)
    pairs = []
    for (u, w), (a, b) in mids.items():
        pairs += [(u, a), (a, b), (b, w)]
    return Graph.undirected(n + 2 * len(mids), pairs, labels, dimension=3)


def make_perturbed_gadget(ell: int, c: int) -> tuple[Graph, Graph]:
    """``H = gad(G)`` and ``H'``, where the gadget of the edge ``(v_{-1}, v_1)`` is turned around.

    The middle node labelled ``(0,1,0)`` moves to the ``v_1`` end and the one
    labelled ``(0,0,1)`` to the ``v_{-1}`` end; the edge between them stays.
    """
    n = order_half_size(ell, c)
    g, _ = make_perturbed_order(ell, c)
    h = gadgetise(g)
    lo, hi = n - 1, n + 1
    a, b = gadget_nodes(g)[(lo, hi)]
    removed = {(lo, a), (a, lo), (b, hi), (hi, b)}
    added = {(lo, b), (b, lo), (a, hi), (hi, a)}
    edges = (set(h.edges) - removed) | added
    return h, Graph(h.num_nodes, 3, h.labels, frozenset(edges), directed=False)


def gadget_edges(g: Graph) -> list[tuple[int, int, int, int]]:
    """All gadgetised edges ``(u, a, b, w)``: a path u-a-b-w labelled P1, P2, P3, P1."""
    out = []
    p1, p2, p3 = (g.pred_sets[i] if g.dimension > i else frozenset() for i in range(3))
    for u in sorted(p1):
        for a in sorted(g.out_sets[u] & p2):
            for b in sorted(g.out_sets[a] & p3):
                for w in sorted(g.out_sets[b] & p1):
                    out.append((u, a, b, w))
    return out


def find_gadget_triangle(g: Graph) -> list[int] | None:
    """A 9-cycle of three gadgetised edges ``u -> v -> w -> u``, as its node list, or None."""
    by_src: dict[int, list[tuple[int, int, int, int]]] = {}
    for e in gadget_edges(g):
        by_src.setdefault(e[0], []).append(e)
    for e1 in gadget_edges(g):
        for e2 in by_src.get(e1[3], ()):
            for e3 in by_src.get(e2[3], ()):
                if e3[3] == e1[0]:
                    return [*e1[:3], *e2[:3], *e3[:3]]
    return None


# -- mutations ---------------------------------------------------------------


@dataclass(frozen=True)
class AddEdge:
    u: int
    v: int


@dataclass(frozen=True)
class RemoveEdge:
    u: int
    v: int


@dataclass(frozen=True)
class FlipLabel:
    v: int
    i: int  # 1-indexed predicate


Edit = Union[AddEdge, RemoveEdge, FlipLabel]


def mutate(g: Graph, edit: Edit) -> Graph:
    """Apply one edit; on undirected graphs edge edits act on both directions."""
    if isinstance(edit, FlipLabel):
        g.check_node(edit.v)
        if not 1 <= edit.i <= g.dimension:
            raise GraphError(f"predicate index {edit.i} outside 1..{g.dimension}")
        labels = list(g.labels)
        lab = list(labels[edit.v])
        lab[edit.i - 1] ^= 1
        labels[edit.v] = tuple(lab)
        return Graph(g.num_nodes, g.dimension, tuple(labels), g.edges, g.directed)
    g.check_node(edit.u)
    g.check_node(edit.v)
    if edit.u == edit.v:
        raise GraphError(f"edit would create a loop at node {edit.u}")
    pair = {(edit.u, edit.v)} if g.directed else {(edit.u, edit.v), (edit.v, edit.u)}
    if isinstance(edit, AddEdge):
        if (edit.u, edit.v) in g.edges:
            raise GraphError(f"edge ({edit.u}, {edit.v}) already present")
        edges = g.edges | pair
    elif isinstance(edit, RemoveEdge):
        if (edit.u, edit.v) not in g.edges:
            raise GraphError(f"edge ({edit.u}, {edit.v}) not present")
        edges = g.edges - pair
    else:
        raise TypeError(f"unknown edit {edit!r}")
    return Graph(g.num_nodes, g.dimension, g.labels, frozenset(edges), g.directed)


def single_edits(g: Graph) -> list[Edit]:
    """Every single edge toggle and label flip, in a fixed order."""
    edits: list[Edit] = []
    if g.directed:
        pairs: Iterable[tuple[int, int]] = ((u, w) for u in g.nodes for w in g.nodes if u != w)
    else:
        pairs = combinations(g.nodes, 2)
    for u, w in pairs:
        edits.append(RemoveEdge(u, w) if (u, w) in g.edges else AddEdge(u, w))
    edits += [FlipLabel(v, i) for v in g.nodes for i in range(1, g.dimension + 1)]
    return edits


def single_edit_mutations(g: Graph) -> list[Graph]:
    return [mutate(g, e) for e in single_edits(g)]


def mutation_corpus(g: Graph, seed: int, count: int, max_edits: int = 3) -> list[Graph]:
    """``count`` seeded mutants of ``g``, each with 1..max_edits random edits."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        h = g
        for _ in range(rng.randint(1, max_edits)):
            h = mutate(h, rng.choice(single_edits(h)))
        out.append(h)
    return out


def gadlin_corpus(seed: int = 7, mutants_per_order: int = 12) -> list[tuple[str, Graph]]:
    """Named graphs for cross-checking the gadget classifiers.

    Gadgetised orders on 1..4 nodes, every single-edit mutation of the
    orders on up to 3 nodes, seeded multi-edit mutants of all four, the
    gadget of a directed 3-cycle and both perturbed pairs at (1,1).
    """
    out: list[tuple[str, Graph]] = []
    for n in range(1, 5):
        h = gadgetise(make_linear_order(n))
        out.append((f"gad(L{n})", h))
        if n <= 3:
            for e in single_edits(h):
                out.append((f"gad(L{n})+{e}", mutate(h, e)))
        for k, m in enumerate(mutation_corpus(h, seed + n, mutants_per_order)):
            out.append((f"gad(L{n})~{k}", m))
    out.append(("gad(C3)", gadgetise(Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)]))))
    h, h2 = make_perturbed_gadget(1, 1)
    out += [("H(1,1)", h), ("H'(1,1)", h2)]
    return out


# -- formulas ----------------------------------------------------------------

TOTALITY = "forall x. forall y. (x = y | E(x,y) | E(y,x))"
TRANSITIVITY = "forall x. forall y. forall z. (E(x,y) & E(y,z) -> E(x,z))"


def formula_totality() -> Formula:
    return parse_formula(TOTALITY)


def formula_phi_lin() -> Formula:
    return parse_formula(f"x = x & {TOTALITY} & {TRANSITIVITY}")


PHI_1 = (
    "forall x. ((P1(x) | P2(x) | P3(x)) & ~(P1(x) & P2(x)) & ~(P1(x) & P3(x))"
    " & ~(P2(x) & P3(x)))"
)
PHI_2 = (
    "forall x. (P2(x) -> exists[=2] y. E(x,y) & exists[=1] y. (E(x,y) & P1(y))"
    " & exists[=1] y. (E(x,y) & P3(y)))"
    " & forall x. (P3(x) -> exists[=2] y. E(x,y) & exists[=1] y. (E(x,y) & P1(y))"
    " & exists[=1] y. (E(x,y) & P2(y)))"
    " & forall x. forall y. ~(P1(x) & P1(y) & E(x,y))"
)
_FWD = "exists[=1] y. exists[=1] z. (P2(y) & P3(z) & E(x,y) & E(y,z) & E(z,xp))"
_BWD = "exists[=1] y. exists[=1] z. (P3(y) & P2(z) & E(x,y) & E(y,z) & E(z,xp))"
# A xor B written as (A | B) & ~(A & B).
PHI_3 = (
    f"forall x. forall xp. (P1(x) & P1(xp) & x != xp -> "
    f"({_FWD} | {_BWD}) & ~({_FWD} & {_BWD}))"
)
PHI_4 = (
    "~exists x1. exists x2. exists x3. exists y1. exists y2. exists y3."
    " exists z1. exists z2. exists z3. ("
    "P1(x1) & P1(x2) & P1(x3) & P2(y1) & P2(y2) & P2(y3) & P3(z1) & P3(z2) & P3(z3)"
    " & E(x1,y1) & E(y1,z1) & E(z1,x2) & E(x2,y2) & E(y2,z2) & E(z2,x3)"
    " & E(x3,y3) & E(y3,z3) & E(z3,x1))"
)


def formula_phi_1() -> Formula:
    return parse_formula(PHI_1)


def formula_phi_2() -> Formula:
    return parse_formula(PHI_2)


def formula_phi_3() -> Formula:
    return parse_formula(PHI_3)


def formula_phi_4() -> Formula:
    return parse_formula(PHI_4)


def formula_phi_gadlin_fo() -> Formula:
    return parse_formula(f"x = x & {PHI_1} & {PHI_2} & {PHI_3} & {PHI_4}")


_CHI = {
    1: "E(x,y) & E(y,x)",
    2: "~E(x,y) & E(y,x)",
    3: "E(x,y) & ~E(y,x)",
    4: "~E(x,y) & ~E(y,x) & x != y",
}


def chi_formula(j: int) -> Formula:
    if j not in _CHI:
        raise FormulaError(f"chi index must be in 1..4, got {j}")
    return parse_formula(_CHI[j])


def _psi_clause(i: int, j: int) -> str:
    return (
        f"(exists[{j + 1}] x. P1(x) -> exists x. (exists[={j}] y. (P2(y) & E(x,y)) & P1(x)"
        " & exists y. (P2(y) & E(x,y) & exists x. (P3(x) & E(y,x)"
        f" & exists y. (P1(y) & E(x,y) & exists[={i}] x. (P2(x) & E(y,x)))))))"
    )


def inf_c2_truncation(which: str, bound: int) -> Formula:
    """Finite part of an infinitary conjunction, indices restricted to ``< bound``.

    ``distinct_outdegree``: no two distinct nodes share an out-degree ``i``.
    ``gadget_psi``: for ``i < j``, if there are more than ``j`` P1 nodes then
    one with ``j`` P2-neighbours has a gadgetised edge to one with ``i``.
    On graphs with at most ``bound`` nodes (resp. P1 nodes) the truncation
    agrees with the full conjunction.
    """
    if bound < 1:
        raise FormulaError("bound must be at least 1")
    if which == "distinct_outdegree":
        clauses = [
            f"forall x. forall y. (exists[={i}] y. E(x,y) & exists[={i}] x. E(y,x) -> x = y)"
            for i in range(bound)
        ]
    elif which == "gadget_psi":
        clauses = [_psi_clause(i, j) for j in range(bound) for i in range(j)]
    else:
        raise FormulaError(f"unknown truncation {which!r}")
    return conj(*(parse_formula(t) for t in ["x = x", *clauses]))


__all__ = [
    "AddEdge",
    "Edit",
    "FlipLabel",
    "RemoveEdge",
    "chi_formula",
    "find_gadget_triangle",
    "formula_phi_1",
    "formula_phi_2",
    "formula_phi_3",
    "formula_phi_4",
    "formula_phi_gadlin_fo",
    "formula_phi_lin",
    "formula_totality",
    "gadget_edges",
    "gadget_nodes",
    "gadgetise",
    "gadlin_corpus",
    "inf_c2_truncation",
    "make_linear_order",
    "make_perturbed_gadget",
    "make_perturbed_order",
    "mutate",
    "mutation_corpus",
    "single_edit_mutations",
    "single_edits",
]
