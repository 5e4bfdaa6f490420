"""Normal form for two-variable counting formulas over simple digraphs.

Every formula with free variables among ``x, y`` is rewritten into a
disjunction of ``alpha(x) & beta(y) & gamma(x, y)`` where ``gamma`` is one of
five mutually exclusive relation kinds between ``x`` and ``y``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product

from .syntax import (
    ATOMS,
    And,
    CountExists,
    Edge,
    Eq,
    Formula,
    FormulaError,
    Not,
    Or,
    conj,
    desugar,
    disj,
    free_vars,
    metrics,
    nnf,
    to_text,
)

DEFAULT_DISJUNCT_CAP = 100_000


class RelationKind(enum.Enum):
    BOTH_EDGES = "both_edges"
    ONLY_FORWARD = "only_forward"
    ONLY_BACKWARD = "only_backward"
    NO_EDGE_DISTINCT = "no_edge_distinct"
    EQUAL = "equal"


# Truth of (E(x,y), E(y,x), x = y) inside each kind, on loop-free graphs.
_KIND_TRUTH = {
    RelationKind.BOTH_EDGES: (True, True, False),
    RelationKind.ONLY_FORWARD: (True, False, False),
    RelationKind.ONLY_BACKWARD: (False, True, False),
    RelationKind.NO_EDGE_DISTINCT: (False, False, False),
    RelationKind.EQUAL: (False, False, True),
}


def relation_formula(kind: RelationKind) -> Formula:
    fwd, bwd = Edge("x", "y"), Edge("y", "x")
    if kind is RelationKind.BOTH_EDGES:
        return And((fwd, bwd))
    if kind is RelationKind.ONLY_FORWARD:
        return And((fwd, Not(bwd)))
    if kind is RelationKind.ONLY_BACKWARD:
        return And((Not(fwd), bwd))
    if kind is RelationKind.NO_EDGE_DISTINCT:
        return And((Not(fwd), Not(bwd), Not(Eq("x", "y"))))
    return Eq("x", "y")


@dataclass(frozen=True)
class Disjunct:
    alpha: Formula
    beta: Formula
    gamma: RelationKind

    def to_formula(self) -> Formula:
        return And((self.alpha, self.beta, relation_formula(self.gamma)))


@dataclass(frozen=True)
class NormalForm:
    disjuncts: tuple[Disjunct, ...]

    def to_formula(self) -> Formula:
        return disj(*(d.to_formula() for d in self.disjuncts))


UNSATISFIABLE = Disjunct(Not(Eq("x", "x")), Not(Eq("y", "y")), RelationKind.EQUAL)


def _dnf(f: Formula, cap: int) -> list[list[Formula]]:
    """Distribute a negation-normal formula into a list of conjunct lists."""
    if isinstance(f, Or):
        out: list[list[Formula]] = []
        for a in f.args:
            out.extend(_dnf(a, cap))
            if len(out) > cap:
                raise FormulaError(f"normal form exceeds {cap} disjuncts")
        return out
    if isinstance(f, And):
        out = [[]]
        for a in f.args:
            parts = _dnf(a, cap)
            if len(out) * len(parts) > cap:
                raise FormulaError(f"normal form exceeds {cap} disjuncts")
            out = [left + right for left, right in product(out, parts)]
        return out
    return [[f]]


def _literal_truth(lit: Formula, fwd: bool, bwd: bool, eq: bool) -> bool:
    positive = not isinstance(lit, Not)
    atom = lit if positive else lit.body
    if isinstance(atom, Eq):
        value = eq
    elif isinstance(atom, Edge) and (atom.src, atom.dst) == ("x", "y"):
        value = fwd
    elif isinstance(atom, Edge) and (atom.src, atom.dst) == ("y", "x"):
        value = bwd
    else:  # pragma: no cover - guarded by the caller
        raise FormulaError(f"not a two-variable literal: {to_text(lit)}")
    return value if positive else not value


def normalize_c2(f: Formula, cap: int = DEFAULT_DISJUNCT_CAP) -> NormalForm:
    if not metrics(f).is_c2:
        raise FormulaError("normalize_c2 expects a formula over the variables x and y only")
    fv = free_vars(f)
    if not fv <= {"x", "y"}:
        raise FormulaError(f"free variables outside x, y: {sorted(fv - {'x', 'y'})}")
    core = desugar(f)
    pads = [Eq(v, v) for v in ("x", "y") if v not in fv]
    if pads:
        core = And((core, *pads))
    core = nnf(core)

    seen: set[Disjunct] = set()
    result: list[Disjunct] = []
    for conjuncts in _dnf(core, cap):
        alpha: list[Formula] = []
        beta: list[Formula] = []
        gamma: list[Formula] = []
        for lit in conjuncts:
            lfv = free_vars(lit)
            if lfv == {"x", "y"}:
                inner = lit.body if isinstance(lit, Not) else lit
                if not isinstance(inner, ATOMS):
                    raise FormulaError(f"unexpected two-variable conjunct {to_text(lit)}")
                gamma.append(lit)
            elif lfv == {"y"}:
                beta.append(lit)
            else:
                alpha.append(lit)
        a = conj(*alpha) if alpha else Eq("x", "x")
        if alpha and not free_vars(a):
            a = And((*alpha, Eq("x", "x")))
        b = conj(*beta) if beta else Eq("y", "y")
        for kind, truth in _KIND_TRUTH.items():
            if all(_literal_truth(lit, *truth) for lit in gamma):
                d = Disjunct(a, b, kind)
                if d not in seen:
                    if len(result) >= cap:
                        raise FormulaError(f"normal form exceeds {cap} disjuncts")
                    seen.add(d)
                    result.append(d)
    if not result:
        result.append(UNSATISFIABLE)
    return NormalForm(tuple(result))


__all__ = [
    "CountExists",
    "DEFAULT_DISJUNCT_CAP",
    "Disjunct",
    "NormalForm",
    "RelationKind",
    "UNSATISFIABLE",
    "normalize_c2",
    "relation_formula",
]
