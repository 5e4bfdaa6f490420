"""Formula AST for first-order logic with counting quantifiers over graphs.

The surface syntax has ``->``, ``<->``, ``forall``, plain ``exists`` and the
exact-count quantifier ``exists[=k]``. The core fragment reached by
:func:`desugar` uses only atoms, ``Not``, n-ary ``And``/``Or`` and
``CountExists``; metrics and normalization are computed on the core form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


class FormulaError(ValueError):
    """Raised for ill-formed formulas or misuse of formula operations."""


@dataclass(frozen=True)
class Pred:
    i: int
    var: str

    def __post_init__(self) -> None:
        if self.i < 1:
            raise FormulaError("predicate indices start at 1")


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class And:
    args: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.args) < 2:
            raise FormulaError("And needs at least two operands; use conj()")


@dataclass(frozen=True)
class Or:
    args: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.args) < 2:
            raise FormulaError("Or needs at least two operands; use disj()")


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall:
    var: str
    body: Formula


@dataclass(frozen=True)
class CountExists:
    """At least ``k`` distinct values of ``var`` satisfy ``body``."""

    k: int
    var: str
    body: Formula

    def __post_init__(self) -> None:
        if self.k < 1:
            raise FormulaError("counting quantifier needs k >= 1")


@dataclass(frozen=True)
class CountExistsExact:
    """Exactly ``k`` distinct values of ``var`` satisfy ``body``."""

    k: int
    var: str
    body: Formula

    def __post_init__(self) -> None:
        if self.k < 0:
            raise FormulaError("exact counting quantifier needs k >= 0")


Formula = Union[
    Pred, Edge, Eq, Not, And, Or, Implies, Iff, Exists, Forall, CountExists, CountExistsExact
]
ATOMS = (Pred, Edge, Eq)
QUANTIFIERS = (Exists, Forall, CountExists, CountExistsExact)


def conj(*fs: Formula) -> Formula:
    if not fs:
        raise FormulaError("empty conjunction")
    return fs[0] if len(fs) == 1 else And(tuple(fs))


def disj(*fs: Formula) -> Formula:
    if not fs:
        raise FormulaError("empty disjunction")
    return fs[0] if len(fs) == 1 else Or(tuple(fs))


def neq(a: str, b: str) -> Formula:
    return Not(Eq(a, b))


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, ATOMS):
        return ()
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, (Implies, Iff)):
        return (f.left, f.right)
    return (f.body,)


def walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def atom_vars(f: Formula) -> tuple[str, ...]:
    if isinstance(f, Pred):
        return (f.var,)
    if isinstance(f, Edge):
        return (f.src, f.dst)
    if isinstance(f, Eq):
        return (f.left, f.right)
    return ()


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, ATOMS):
        return frozenset(atom_vars(f))
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    out: frozenset[str] = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


def variables(f: Formula) -> frozenset[str]:
    """Every variable name occurring in ``f``, free or bound."""
    out: set[str] = set()
    for node in walk(f):
        out.update(atom_vars(node))
        if isinstance(node, QUANTIFIERS):
            out.add(node.var)
    return frozenset(out)


def rename(f: Formula, mapping: dict[str, str]) -> Formula:
    """Rename every variable occurrence (free and bound) simultaneously."""
    r = lambda v: mapping.get(v, v)  # noqa: E731
    if isinstance(f, Pred):
        return Pred(f.i, r(f.var))
    if isinstance(f, Edge):
        return Edge(r(f.src), r(f.dst))
    if isinstance(f, Eq):
        return Eq(r(f.left), r(f.right))
    if isinstance(f, Not):
        return Not(rename(f.body, mapping))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(rename(a, mapping) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(rename(f.left, mapping), rename(f.right, mapping))
    if isinstance(f, (Exists, Forall)):
        return type(f)(r(f.var), rename(f.body, mapping))
    return type(f)(f.k, r(f.var), rename(f.body, mapping))


def swap_xy(f: Formula) -> Formula:
    return rename(f, {"x": "y", "y": "x"})


# -- desugaring --------------------------------------------------------------


def desugar(f: Formula) -> Formula:
    """Rewrite into the core fragment: atoms, Not, And, Or, CountExists."""
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(desugar(a) for a in f.args))
    if isinstance(f, Implies):
        return Or((Not(desugar(f.left)), desugar(f.right)))
    if isinstance(f, Iff):
        a, b = desugar(f.left), desugar(f.right)
        return Or((And((a, b)), And((Not(a), Not(b)))))
    if isinstance(f, Exists):
        return CountExists(1, f.var, desugar(f.body))
    if isinstance(f, Forall):
        return Not(CountExists(1, f.var, Not(desugar(f.body))))
    if isinstance(f, CountExists):
        return CountExists(f.k, f.var, desugar(f.body))
    # exists[=k] y. phi  ==  exists[k] y. phi & ~exists[k+1] y. phi
    body = desugar(f.body)
    upper = Not(CountExists(f.k + 1, f.var, body))
    if f.k == 0:
        return upper
    return And((CountExists(f.k, f.var, body), upper))


def nnf(f: Formula) -> Formula:
    """Push negations onto atoms and counting quantifiers (core input)."""
    if isinstance(f, Not):
        b = f.body
        if isinstance(b, Not):
            return nnf(b.body)
        if isinstance(b, And):
            return Or(tuple(nnf(Not(a)) for a in b.args))
        if isinstance(b, Or):
            return And(tuple(nnf(Not(a)) for a in b.args))
        if isinstance(b, CountExists):
            return Not(CountExists(b.k, b.var, nnf(b.body)))
        if isinstance(b, ATOMS):
            return f
        raise FormulaError(f"nnf expects a desugared formula, got {type(b).__name__}")
    if isinstance(f, (And, Or)):
        return type(f)(tuple(nnf(a) for a in f.args))
    if isinstance(f, CountExists):
        return CountExists(f.k, f.var, nnf(f.body))
    if isinstance(f, ATOMS):
        return f
    raise FormulaError(f"nnf expects a desugared formula, got {type(f).__name__}")


# -- metrics -----------------------------------------------------------------


@dataclass(frozen=True)
class FormulaMetrics:
    depth: int
    counting_rank: int
    variables: frozenset[str]
    is_c2: bool


def _depth_rank(f: Formula) -> tuple[int, int]:
    if isinstance(f, ATOMS):
        return 0, 0
    if isinstance(f, CountExists):
        d, r = _depth_rank(f.body)
        return d + 1, max(r, f.k)
    depth = rank = 0
    for c in children(f):
        d, r = _depth_rank(c)
        depth, rank = max(depth, d), max(rank, r)
    return depth, rank


def metrics(f: Formula) -> FormulaMetrics:
    depth, rank = _depth_rank(desugar(f))
    vs = variables(f)
    return FormulaMetrics(depth, rank, vs, vs <= {"x", "y"})


# -- pretty printing ---------------------------------------------------------

_BINARY = (And, Or, Implies, Iff)


def _wrap(f: Formula, parens: bool) -> str:
    s = to_text(f)
    return f"({s})" if parens else s


def to_text(f: Formula) -> str:
    """Render in the parser's grammar with canonical spacing."""
    if isinstance(f, Pred):
        return f"P{f.i}({f.var})"
    if isinstance(f, Edge):
        return f"E({f.src},{f.dst})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return f"{f.body.left} != {f.body.right}"
        return "~" + _wrap(f.body, isinstance(f.body, _BINARY))
    if isinstance(f, And):
        return " & ".join(_wrap(a, isinstance(a, _BINARY)) for a in f.args)
    if isinstance(f, Or):
        return " | ".join(_wrap(a, isinstance(a, (Or, Implies, Iff))) for a in f.args)
    if isinstance(f, Implies):
        return f"{_wrap(f.left, isinstance(f.left, (Implies, Iff)))} -> " + _wrap(
            f.right, isinstance(f.right, (Implies, Iff))
        )
    if isinstance(f, Iff):
        return f"{_wrap(f.left, isinstance(f.left, Iff))} <-> " + _wrap(
            f.right, isinstance(f.right, Iff)
        )
    if isinstance(f, Exists):
        head = f"exists {f.var}. "
    elif isinstance(f, Forall):
        head = f"forall {f.var}. "
    elif isinstance(f, CountExists):
        head = f"exists[{f.k}] {f.var}. "
    else:
        head = f"exists[={f.k}] {f.var}. "
    return head + _wrap(f.body, isinstance(f.body, _BINARY))
