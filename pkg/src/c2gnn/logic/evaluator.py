"""Model checking of counting-logic formulas on graphs.

Two evaluators are provided. :func:`evaluate_naive` follows the semantics
clause by clause and exists for cross-checking. :class:`Evaluator` compiles a
formula into a hash-consed core DAG and evaluates it with

* miniscoping: conjuncts that do not mention a quantified variable are
  evaluated outside its scope (valid for every ``exists[k]``, ``k >= 1``);
* reordering of blocks of plain existentials so that each newly bound variable
  is reachable by an edge atom from an already bound one;
* guided iteration: a quantifier whose body forces ``E(a, v)``, ``E(v, a)``,
  ``v = a`` or ``P_i(v)`` only iterates over the matching candidates;
* memoisation on (subformula, values of its free variables).

Together these keep the nine-variable pattern query of the gadget formula
linear in the number of gadget paths instead of ``n**9``.
"""

from __future__ import annotations

from typing import Mapping

from ..graph import Graph
from .syntax import (
    ATOMS,
    And,
    CountExists,
    CountExistsExact,
    Edge,
    Eq,
    Exists,
    Forall,
    Formula,
    FormulaError,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    desugar,
    free_vars,
    nnf,
)

# -- reference semantics -----------------------------------------------------


def evaluate_naive(g: Graph, f: Formula, assignment: Mapping[str, int]) -> bool:
    env = dict(assignment)
    missing = free_vars(f) - env.keys()
    if missing:
        raise FormulaError(f"unassigned free variables: {sorted(missing)}")
    return _naive(g, f, env)


def _naive(g: Graph, f: Formula, env: dict[str, int]) -> bool:
    if isinstance(f, Pred):
        return g.has_pred(f.i, env[f.var])
    if isinstance(f, Edge):
        return (env[f.src], env[f.dst]) in g.edges
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Not):
        return not _naive(g, f.body, env)
    if isinstance(f, And):
        return all(_naive(g, a, env) for a in f.args)
    if isinstance(f, Or):
        return any(_naive(g, a, env) for a in f.args)
    if isinstance(f, Implies):
        return (not _naive(g, f.left, env)) or _naive(g, f.right, env)
    if isinstance(f, Iff):
        return _naive(g, f.left, env) == _naive(g, f.right, env)
    count = sum(_naive(g, f.body, {**env, f.var: a}) for a in g.nodes)
    if isinstance(f, Exists):
        return count >= 1
    if isinstance(f, Forall):
        return count == g.num_nodes
    if isinstance(f, CountExists):
        return count >= f.k
    if isinstance(f, CountExistsExact):
        return count == f.k
    raise FormulaError(f"unknown formula node {f!r}")


# -- compiled evaluation -----------------------------------------------------

TRUE, PRED, EDGE, EQ, NOT, AND, OR, COUNT = range(8)


class _Node:
    __slots__ = ("uid", "kind", "i", "a", "b", "args", "k", "var", "fv", "guards")

    def __init__(self, uid, kind, *, i=0, a="", b="", args=(), k=0, var="", fv=()):
        self.uid = uid
        self.kind = kind
        self.i = i
        self.a = a
        self.b = b
        self.args = args
        self.k = k
        self.var = var
        self.fv = fv
        self.guards: tuple = ()


class _Compiler:
    def __init__(self) -> None:
        self.table: dict[tuple, _Node] = {}

    def _make(self, key: tuple, kind: int, fv: frozenset[str], **kw) -> _Node:
        node = self.table.get(key)
        if node is None:
            node = _Node(len(self.table), kind, fv=tuple(sorted(fv)), **kw)
            self.table[key] = node
        return node

    def true(self) -> _Node:
        return self._make(("T",), TRUE, frozenset())

    def compile(self, f: Formula) -> _Node:
        return self.build(nnf(desugar(f)))

    def build(self, f: Formula) -> _Node:
        if isinstance(f, Pred):
            return self._make(("P", f.i, f.var), PRED, frozenset([f.var]), i=f.i, a=f.var)
        if isinstance(f, Edge):
            return self._make(("E", f.src, f.dst), EDGE, frozenset([f.src, f.dst]), a=f.src, b=f.dst)
        if isinstance(f, Eq):
            return self._make(("=", f.left, f.right), EQ, frozenset([f.left, f.right]), a=f.left, b=f.right)
        if isinstance(f, Not):
            body = self.build(f.body)
            return self._make(("~", body.uid), NOT, frozenset(body.fv), args=(body,))
        if isinstance(f, (And, Or)):
            return self.junction(AND if isinstance(f, And) else OR, [self.build(a) for a in f.args])
        if isinstance(f, CountExists):
            return self.quantifier(f)
        raise FormulaError(f"unexpected node in core formula: {f!r}")

    def junction(self, kind: int, parts: list[_Node]) -> _Node:
        flat: list[_Node] = []
        for p in parts:
            flat.extend(p.args if p.kind == kind else (p,))
        # Cheap, unquantified operands first for short-circuiting.
        flat.sort(key=lambda n: n.kind == COUNT or n.kind == NOT and n.args[0].kind == COUNT)
        if kind == AND:
            flat = [p for p in flat if p.kind != TRUE] or [self.true()]
        if len(flat) == 1:
            return flat[0]
        fv: set[str] = set()
        for p in flat:
            fv.update(p.fv)
        key = ("&" if kind == AND else "|",) + tuple(p.uid for p in flat)
        return self._make(key, kind, frozenset(fv), args=tuple(flat))

    def quantifier(self, f: CountExists) -> _Node:
        if f.k == 1:
            block_vars, body = [], f
            while isinstance(body, CountExists) and body.k == 1:
                block_vars.append(body.var)
                body = body.body
            if len(block_vars) > 1 and len(set(block_vars)) == len(block_vars):
                return self.exists_block(block_vars, body)
        return self.count(f.k, f.var, self.build(f.body))

    def count(self, k: int, var: str, body: _Node) -> _Node:
        parts = list(body.args) if body.kind == AND else [body]
        outside = [p for p in parts if var not in p.fv]
        inside = [p for p in parts if var in p.fv]
        inner = self.junction(AND, inside) if inside else self.true()
        fv = frozenset(inner.fv) - {var}
        node = self._make(("#", k, var, inner.uid), COUNT, fv, args=(inner,), k=k, var=var)
        if not node.guards:
            node.guards = _guards(var, inside)
        if outside:
            return self.junction(AND, outside + [node])
        return node

    def exists_block(self, block_vars: list[str], body: Formula) -> _Node:
        parts_node = self.build(body)
        parts = list(parts_node.args) if parts_node.kind == AND else [parts_node]
        block = set(block_vars)
        bound = set().union(*(p.fv for p in parts)) - block
        order: list[str] = []
        remaining = list(block_vars)
        while remaining:
            order.append(_pick_next(remaining, bound | set(order), parts))
            remaining.remove(order[-1])
        position = {v: i for i, v in enumerate(order)}
        levels: list[list[_Node]] = [[] for _ in range(len(order) + 1)]
        for p in parts:
            inner = [position[v] + 1 for v in p.fv if v in position]
            levels[max(inner, default=0)].append(p)
        node = self.junction(AND, levels[-1]) if levels[-1] else self.true()
        for depth in range(len(order), 0, -1):
            node = self.count(1, order[depth - 1], node)
            below = levels[depth - 1]
            if below:
                node = self.junction(AND, below + [node])
        return node


def _links(p: _Node, v: str, bound: set[str]) -> bool:
    if p.kind in (EDGE, EQ):
        return (p.a == v and p.b in bound) or (p.b == v and p.a in bound)
    return False


def _pick_next(remaining: list[str], bound: set[str], parts: list[_Node]) -> str:
    for v in remaining:
        if any(_links(p, v, bound) for p in parts):
            return v
    for v in remaining:
        if any(p.kind == PRED and p.a == v for p in parts):
            return v
    return remaining[0]


def _guards(var: str, parts: list[_Node]) -> tuple:
    guards = []
    for p in parts:
        if p.kind == EDGE:
            if p.a == var and p.b == var:
                guards.append(("none",))
            elif p.a == var:
                guards.append(("in", p.b))
            elif p.b == var:
                guards.append(("out", p.a))
        elif p.kind == EQ:
            if p.a == var and p.b != var:
                guards.append(("eq", p.b))
            elif p.b == var and p.a != var:
                guards.append(("eq", p.a))
        elif p.kind == PRED:
            guards.append(("pred", p.i))
    return tuple(guards)


class Evaluator:
    """Memoising evaluator bound to one graph.

    The memo table lives as long as the evaluator, so evaluating many
    formulas (or one formula at many nodes) on the same graph shares work.
    """

    def __init__(self, g: Graph) -> None:
        self.g = g
        self._compiler = _Compiler()
        self._compiled: dict[int, tuple[Formula, _Node]] = {}
        self._memo: dict[tuple, bool] = {}
        self._all = tuple(g.nodes)
        self._empty: tuple[int, ...] = ()

    def compile(self, f: Formula) -> _Node:
        hit = self._compiled.get(id(f))
        if hit is not None and hit[0] is f:
            return hit[1]
        node = self._compiler.compile(f)
        self._compiled[id(f)] = (f, node)
        return node

    def evaluate(self, f: Formula, assignment: Mapping[str, int]) -> bool:
        env = dict(assignment)
        missing = free_vars(f) - env.keys()
        if missing:
            raise FormulaError(f"unassigned free variables: {sorted(missing)}")
        for v in env.values():
            self.g.check_node(v)
        return self._ev(self.compile(f), env)

    def _candidates(self, node: _Node, env: dict[str, int]):
        g = self.g
        best = self._all
        for guard in node.guards:
            tag = guard[0]
            if tag == "out":
                cand = g.out_sets[env[guard[1]]]
            elif tag == "in":
                cand = g.in_sets[env[guard[1]]]
            elif tag == "eq":
                cand = (env[guard[1]],)
            elif tag == "pred":
                cand = g.pred_sets[guard[1] - 1] if guard[1] <= g.dimension else self._empty
            else:
                cand = self._empty
            if len(cand) < len(best):
                best = cand
        return best

    def _ev(self, node: _Node, env: dict[str, int]) -> bool:
        kind = node.kind
        if kind == PRED:
            return self.g.has_pred(node.i, env[node.a])
        if kind == EDGE:
            return (env[node.a], env[node.b]) in self.g.edges
        if kind == EQ:
            return env[node.a] == env[node.b]
        if kind == NOT:
            return not self._ev(node.args[0], env)
        if kind == AND:
            for a in node.args:
                if not self._ev(a, env):
                    return False
            return True
        if kind == OR:
            for a in node.args:
                if self._ev(a, env):
                    return True
            return False
        if kind == TRUE:
            return True
        key = (node.uid,) + tuple(env[v] for v in node.fv)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        body, var, need = node.args[0], node.var, node.k
        candidates = self._candidates(node, env)
        result = False
        if len(candidates) >= need:
            saved = env.get(var)
            found = 0
            for a in candidates:
                env[var] = a
                if self._ev(body, env):
                    found += 1
                    if found >= need:
                        result = True
                        break
            if saved is None:
                del env[var]
            else:
                env[var] = saved
        self._memo[key] = result
        return result


def evaluate(g: Graph, f: Formula, assignment: Mapping[str, int] | None = None) -> bool:
    return Evaluator(g).evaluate(f, assignment or {})


def classify(g: Graph, f: Formula) -> list[bool]:
    """Apply a one-free-variable formula as a node classifier."""
    fv = free_vars(f)
    if len(fv) != 1:
        raise FormulaError(f"a node classifier needs exactly one free variable, got {sorted(fv)}")
    (var,) = fv
    ev = Evaluator(g)
    return [ev.evaluate(f, {var: v}) for v in g.nodes]
