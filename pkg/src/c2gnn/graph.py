"""Finite simple node-labelled directed graphs.

Undirected graphs are directed graphs with a symmetric edge set. Node ids are
dense integers ``0..num_nodes-1`` and labels are bit vectors of a fixed width
(``dimension``); predicate ``P_i`` reads bit ``i-1``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable


class GraphError(ValueError):
    """Raised for malformed graphs or invalid node references."""


class NeighborhoodKind(enum.Enum):
    IN = "in"
    OUT = "out"
    ANY = "any"
    BOTH = "both"
    IN_ONLY = "in_only"
    OUT_ONLY = "out_only"
    NON_NEIGHBOR = "non_neighbor"


Label = tuple[int, ...]
Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    num_nodes: int
    dimension: int = 0
    labels: tuple[Label, ...] = ()
    edges: frozenset[Edge] = field(default_factory=frozenset)
    # Serialization hint only; semantics come from the edge set.
    directed: bool = True

    def __post_init__(self) -> None:
        n, d = self.num_nodes, self.dimension
        if n < 0 or d < 0:
            raise GraphError("num_nodes and dimension must be non-negative")
        labels = self.labels
        if not labels and n:
            labels = ((0,) * d,) * n
        labels = tuple(tuple(int(b) for b in lab) for lab in labels)
        if len(labels) != n:
            raise GraphError(f"expected {n} labels, got {len(labels)}")
        for v, lab in enumerate(labels):
            if len(lab) != d or any(b not in (0, 1) for b in lab):
                raise GraphError(f"label of node {v} is not a 0/1 vector of length {d}")
        edges = frozenset((int(u), int(w)) for u, w in self.edges)
        for u, w in edges:
            if not (0 <= u < n and 0 <= w < n):
                raise GraphError(f"edge ({u}, {w}) refers to a missing node")
            if u == w:
                raise GraphError(f"loop at node {u}")
        if not self.directed and any((w, u) not in edges for u, w in edges):
            raise GraphError("undirected graph with an asymmetric edge set")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(
        cls,
        num_nodes: int,
        edges: Iterable[Edge],
        labels: Iterable[Iterable[int]] | None = None,
        dimension: int | None = None,
    ) -> Graph:
        labs = tuple(tuple(lab) for lab in labels) if labels is not None else ()
        if dimension is None:
            dimension = len(labs[0]) if labs else 0
        return cls(num_nodes, dimension, labs, frozenset(edges), directed=True)

    @classmethod
    def undirected(
        cls,
        num_nodes: int,
        pairs: Iterable[Edge],
        labels: Iterable[Iterable[int]] | None = None,
        dimension: int | None = None,
    ) -> Graph:
        """Build an undirected graph; each pair ``{u, v}`` becomes both ordered edges."""
        labs = tuple(tuple(lab) for lab in labels) if labels is not None else ()
        if dimension is None:
            dimension = len(labs[0]) if labs else 0
        sym = set()
        for u, w in pairs:
            sym.add((u, w))
            sym.add((w, u))
        return cls(num_nodes, dimension, labs, frozenset(sym), directed=False)

    @property
    def nodes(self) -> range:
        return range(self.num_nodes)

    @cached_property
    def out_sets(self) -> tuple[frozenset[int], ...]:
        out: list[set[int]] = [set() for _ in range(self.num_nodes)]
        for u, w in self.edges:
            out[u].add(w)
        return tuple(frozenset(s) for s in out)

    @cached_property
    def in_sets(self) -> tuple[frozenset[int], ...]:
        inc: list[set[int]] = [set() for _ in range(self.num_nodes)]
        for u, w in self.edges:
            inc[w].add(u)
        return tuple(frozenset(s) for s in inc)

    @cached_property
    def pred_sets(self) -> tuple[frozenset[int], ...]:
        """``pred_sets[i]`` holds the nodes whose bit ``i`` is set (0-indexed)."""
        return tuple(
            frozenset(v for v in self.nodes if self.labels[v][i]) for i in range(self.dimension)
        )

    def has_edge(self, u: int, w: int) -> bool:
        return (u, w) in self.edges

    def has_pred(self, i: int, v: int) -> bool:
        """Truth of ``P_i(v)`` with 1-indexed ``i``; predicates beyond the dimension are false."""
        return 1 <= i <= self.dimension and self.labels[v][i - 1] == 1

    def check_node(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.num_nodes):
            raise GraphError(f"node {v!r} out of range for a graph with {self.num_nodes} nodes")

    def relabel(self, perm: list[int]) -> Graph:
        """Return the isomorphic copy in which node ``v`` becomes ``perm[v]``."""
        if sorted(perm) != list(self.nodes):
            raise GraphError("relabel expects a permutation of the node ids")
        labels = [()] * self.num_nodes
        for v in self.nodes:
            labels[perm[v]] = self.labels[v]
        edges = frozenset((perm[u], perm[w]) for u, w in self.edges)
        return Graph(self.num_nodes, self.dimension, tuple(labels), edges, self.directed)


def neighbors(g: Graph, v: int, kind: NeighborhoodKind) -> tuple[int, ...]:
    """Nodes in the requested neighbourhood cell of ``v``, ascending."""
    g.check_node(v)
    ins, outs = g.in_sets[v], g.out_sets[v]
    if kind is NeighborhoodKind.IN:
        cell = ins
    elif kind is NeighborhoodKind.OUT:
        cell = outs
    elif kind is NeighborhoodKind.ANY:
        cell = ins | outs
    elif kind is NeighborhoodKind.BOTH:
        cell = ins & outs
    elif kind is NeighborhoodKind.IN_ONLY:
        cell = ins - outs
    elif kind is NeighborhoodKind.OUT_ONLY:
        cell = outs - ins
    elif kind is NeighborhoodKind.NON_NEIGHBOR:
        cell = set(g.nodes) - ins - outs - {v}
    else:  # pragma: no cover
        raise GraphError(f"unknown neighbourhood kind {kind!r}")
    return tuple(sorted(cell))


def is_undirected(g: Graph) -> bool:
    return all((w, u) in g.edges for u, w in g.edges)


def _is_total(g: Graph) -> bool:
    # (x = y) | E(x,y) | E(y,x)
    return all(
        u == w or (u, w) in g.edges or (w, u) in g.edges for u in g.nodes for w in g.nodes
    )


def is_strict_linear_order(g: Graph) -> bool:
    """Irreflexive, total and transitive, checked literally."""
    if any(u == w for u, w in g.edges):
        return False
    if not _is_total(g):
        return False
    out = g.out_sets
    return all(z in out[u] for u, w in g.edges for z in out[w])


def is_strict_linear_order_alt(g: Graph) -> bool:
    """Irreflexive, total, and no two nodes share an out-degree."""
    if any(u == w for u, w in g.edges):
        return False
    if not _is_total(g):
        return False
    degrees = [len(s) for s in g.out_sets]
    return len(set(degrees)) == len(degrees)


# -- JSON --------------------------------------------------------------------


def to_json(g: Graph) -> dict:
    if g.directed:
        edges = sorted(g.edges)
    else:
        edges = sorted((u, w) for u, w in g.edges if u < w)
    return {
        "directed": g.directed,
        "dimension": g.dimension,
        "num_nodes": g.num_nodes,
        "labels": [list(lab) for lab in g.labels],
        "edges": [list(e) for e in edges],
    }


def from_json(data: dict) -> Graph:
    try:
        directed = bool(data["directed"])
        d = int(data["dimension"])
        n = int(data["num_nodes"])
        labels = [tuple(lab) for lab in data["labels"]]
        pairs = [(int(u), int(w)) for u, w in data["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from exc
    if directed:
        return Graph.from_edges(n, pairs, labels, dimension=d)
    return Graph.undirected(n, pairs, labels, dimension=d)


def dumps(g: Graph) -> str:
    return json.dumps(to_json(g))


def loads(text: str) -> Graph:
    return from_json(json.loads(text))


def read_graph(path: str | Path) -> Graph:
    return loads(Path(path).read_text(encoding="utf-8"))


def write_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(dumps(g) + "\n", encoding="utf-8")
