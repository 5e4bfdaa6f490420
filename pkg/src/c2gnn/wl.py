"""Bounded Weisfeiler-Leman refinement and distinguishing formulas.

A node's colour in round ``r+1`` is the tuple

    (colour in round r, [[both]]^c, [[in_only]]^c, [[out_only]]^c, [[non_nbr]]^c)

of its previous colour and the capped multisets of previous colours over the
four neighbourhood cells. Colours are interned in a :class:`ColorTable` that
can be shared between graphs, which makes colours comparable across them
while keeping each graph's own non-neighbour cell.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import chi_formula
from .graph import Graph
from .logic.syntax import (
    CountExists,
    Eq,
    Formula,
    Not,
    Pred,
    conj,
    swap_xy,
)

ColorId = int
BoundedMultiset = tuple[tuple[ColorId, int], ...]


def bound_multiset(items: Iterable[ColorId], c: int) -> BoundedMultiset:
    """Ascending (colour, multiplicity) pairs with multiplicities capped at ``c``."""
    if c <= 0:
        return ()
    counts = Counter(items)
    return tuple((k, min(m, c)) for k, m in sorted(counts.items()))


def expand_multiset(m: BoundedMultiset) -> list[ColorId]:
    return [k for k, mult in m for _ in range(mult)]


class ColorTableError(ValueError):
    pass


class ColorTable:
    """Bijection between colour ids and colour structures."""

    def __init__(self) -> None:
        self._ids: dict[tuple, ColorId] = {}
        self._structs: list[tuple] = []
        self._round: list[int] = []

    def __len__(self) -> int:
        return len(self._structs)

    def intern(self, struct: tuple, round_: int) -> ColorId:
        cid = self._ids.get(struct)
        if cid is None:
            cid = len(self._structs)
            self._ids[struct] = cid
            self._structs.append(struct)
            self._round.append(round_)
        return cid

    def structure(self, cid: ColorId) -> tuple:
        if not 0 <= cid < len(self._structs):
            raise ColorTableError(f"unknown colour id {cid}")
        return self._structs[cid]

    def round_of(self, cid: ColorId) -> int:
        self.structure(cid)
        return self._round[cid]


def base_color(label: Sequence[int]) -> tuple:
    return ("label", tuple(label))


@dataclass
class ColorAssignment:
    graph: Graph
    c: int
    table: ColorTable
    rounds: list[tuple[ColorId, ...]] = field(default_factory=list)

    def at(self, r: int) -> tuple[ColorId, ...]:
        return self.rounds[r]

    def partition(self, r: int) -> list[list[int]]:
        return partition(self.rounds[r])


def initial_colors(g: Graph, table: ColorTable) -> tuple[ColorId, ...]:
    return tuple(table.intern(base_color(lab), 0) for lab in g.labels)


def _cells(g: Graph, v: int) -> tuple[frozenset[int], ...]:
    ins, outs = g.in_sets[v], g.out_sets[v]
    both = ins & outs
    return both, ins - both, outs - both


def wl_step(
    g: Graph, colors: Sequence[ColorId], c: int, table: ColorTable, round_: int | None = None
) -> tuple[ColorId, ...]:
    if len(colors) != g.num_nodes:
        raise ValueError(f"expected {g.num_nodes} colours, got {len(colors)}")
    if round_ is None:
        round_ = table.round_of(colors[0]) + 1 if colors else 0
    everyone = Counter(colors)
    new = []
    for v in g.nodes:
        both, in_only, out_only = _cells(g, v)
        rest = everyone.copy()
        rest[colors[v]] -= 1
        cells = []
        for cell in (both, in_only, out_only):
            items = [colors[w] for w in cell]
            rest.subtract(items)
            cells.append(bound_multiset(items, c))
        non_nbr = tuple((k, min(m, c)) for k, m in sorted(rest.items()) if m > 0) if c > 0 else ()
        new.append(table.intern((colors[v], *cells, non_nbr), round_))
    return tuple(new)


def run_wl(
    graphs: Sequence[Graph], c: int, rounds: int, table: ColorTable | None = None
) -> list[ColorAssignment]:
    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    table = table if table is not None else ColorTable()
    out = []
    for g in graphs:
        ca = ColorAssignment(g, c, table, [initial_colors(g, table)])
        out.append(ca)
    # Round by round, so ids within a round are contiguous across graphs.
    for r in range(1, rounds + 1):
        for ca in out:
            ca.rounds.append(wl_step(ca.graph, ca.rounds[-1], c, table, r))
    return out


def partition(colors: Sequence[int]) -> list[list[int]]:
    """Colour classes as sorted node lists, ordered by their smallest node."""
    classes: dict[int, list[int]] = {}
    for v, col in enumerate(colors):
        classes.setdefault(col, []).append(v)
    return sorted(classes.values())


def partition_sizes(colors: Sequence[int]) -> list[int]:
    return [len(cls) for cls in partition(colors)]


def stable_round(g: Graph, c: int) -> int:
    """Smallest ``r`` whose partition equals that of round ``r + 1``."""
    table = ColorTable()
    colors = initial_colors(g, table)
    r = 0
    while True:
        nxt = wl_step(g, colors, c, table, r + 1)
        if len(set(nxt)) == len(set(colors)):
            return r
        colors, r = nxt, r + 1


def classic_wl(g: Graph) -> list[list[int]]:
    """Stable partition of directed 1-WL with exact multisets (reference)."""
    colors: list = [("label", lab) for lab in g.labels]
    size = len(set(colors))
    while True:
        sigs = []
        for v in g.nodes:
            both, in_only, out_only = _cells(g, v)
            sigs.append(
                (
                    colors[v],
                    tuple(sorted(Counter(colors[w] for w in both).items())),
                    tuple(sorted(Counter(colors[w] for w in in_only).items())),
                    tuple(sorted(Counter(colors[w] for w in out_only).items())),
                )
            )
        ids = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ids[s] for s in sigs]
        if len(ids) == size:
            return partition(new)
        colors, size = new, len(ids)


def stable_partition(g: Graph, c: int) -> list[list[int]]:
    r = stable_round(g, c)
    (ca,) = run_wl([g], c, r)
    return ca.partition(r)


# -- distinguishing formulas -------------------------------------------------

_CHI = {j: chi_formula(j) for j in range(1, 5)}


class _Distinguisher:
    def __init__(self, a: ColorAssignment, b: ColorAssignment) -> None:
        if a.table is not b.table:
            raise ColorTableError("colour assignments come from different tables")
        if a.c != b.c:
            raise ColorTableError("colour assignments use different bounds")
        self.a, self.b, self.table = a, b, a.table
        self.memo: dict[tuple[int, int, int], Formula] = {}

    def present(self, r: int) -> list[ColorId]:
        return sorted(set(self.a.rounds[r]) | set(self.b.rounds[r]))

    def separator(self, r: int, t: ColorId) -> Formula:
        """Formula in ``y`` true exactly at the round-``r`` nodes of colour ``t``."""
        parts = [self.build(r, t, other) for other in self.present(r) if other != t]
        if not parts:
            return Eq("y", "y")
        return swap_xy(conj(*parts))

    def build(self, r: int, s: ColorId, t: ColorId) -> Formula:
        key = (r, s, t)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._build(r, s, t)
        return hit

    def _build(self, r: int, s: ColorId, t: ColorId) -> Formula:
        if s == t:
            raise ValueError("cannot separate a colour from itself")
        ss, st = self.table.structure(s), self.table.structure(t)
        if r == 0:
            la, lb = ss[1], st[1]
            if len(la) != len(lb):
                raise ColorTableError("labels of different dimensions")
            lits = [Pred(i + 1, "x") if bit else Not(Pred(i + 1, "x")) for i, bit in enumerate(la)]
            return conj(*lits)
        if ss[0] != st[0]:
            return self.build(r - 1, ss[0], st[0])
        for j in range(1, 5):
            ma, mb = dict(ss[j]), dict(st[j])
            if ma == mb:
                continue
            t2 = min(k for k in set(ma) | set(mb) if ma.get(k, 0) != mb.get(k, 0))
            ka, kb = ma.get(t2, 0), mb.get(t2, 0)
            body = conj(self.separator(r - 1, t2), _CHI[j])
            if ka > kb:
                return CountExists(ka, "y", body)
            return Not(CountExists(kb, "y", body))
        raise ColorTableError(f"colours {s} and {t} have identical structures")


def build_distinguishing_formula(
    ga: Graph,
    u: int,
    gb: Graph,
    v: int,
    ell: int,
    c: int,
    assignments: tuple[ColorAssignment, ColorAssignment] | None = None,
) -> Formula | None:
    """A formula in ``C2`` of depth <= ell and rank <= c true at ``u`` and false at ``v``.

    Returns None when the round-``ell`` colours agree. ``assignments`` may be
    passed to reuse a joint run; otherwise one is computed.
    """
    ga.check_node(u)
    gb.check_node(v)
    if assignments is None:
        assignments = tuple(run_wl([ga, gb], c, ell))  # type: ignore[assignment]
    a, b = assignments
    if a.graph is not ga or b.graph is not gb or a.c != c or len(a.rounds) <= ell:
        raise ColorTableError("assignments do not match the requested graphs, bound or depth")
    s, t = a.rounds[ell][u], b.rounds[ell][v]
    if s == t:
        return None
    return _Distinguisher(a, b).build(ell, s, t)


class Distinguisher:
    """Reusable builder over a fixed pair of joint colour assignments."""

    def __init__(self, a: ColorAssignment, b: ColorAssignment) -> None:
        self._d = _Distinguisher(a, b)
        self.a, self.b = a, b

    def formula(self, u: int, v: int, ell: int) -> Formula | None:
        s, t = self.a.rounds[ell][u], self.b.rounds[ell][v]
        return None if s == t else self._d.build(ell, s, t)
