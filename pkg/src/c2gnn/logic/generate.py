"""Seeded random formulas of bounded depth and counting rank.

Generation is grammar-directed and top-down: every quantifier consumes one
unit of the depth budget and picks its count from ``1..rank``; exact counts
``exists[=k]`` are only drawn when ``k + 1 <= rank`` so the desugared rank
stays within budget. Atoms only mention variables that are currently free
(bound by an enclosing quantifier or listed in ``free``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .syntax import (
    And,
    CountExists,
    CountExistsExact,
    Edge,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
)


@dataclass(frozen=True)
class GeneratorConfig:
    depth: int
    rank: int
    dimension: int = 2
    free: tuple[str, ...] = ("x",)
    variables: tuple[str, ...] = ("x", "y")
    max_size: int = 12
    p_atom: float = 0.3


class FormulaGenerator:
    def __init__(self, config: GeneratorConfig, seed: int) -> None:
        if config.rank < 1 and config.depth > 0:
            raise ValueError("quantifiers need rank >= 1")
        self.config = config
        self.rng = random.Random(seed)

    def sample(self) -> Formula:
        self._budget = self.config.max_size
        return self._formula(self.config.depth, set(self.config.free))

    def _atom(self, avail: set[str]) -> Formula:
        rng, cfg = self.rng, self.config
        vs = sorted(avail)
        kinds = ["eq", "edge"] + (["pred"] * 2 if cfg.dimension else [])
        kind = rng.choice(kinds)
        if kind == "pred":
            return Pred(rng.randint(1, cfg.dimension), rng.choice(vs))
        a, b = rng.choice(vs), rng.choice(vs)
        return Eq(a, b) if kind == "eq" else Edge(a, b)

    def _formula(self, depth: int, avail: set[str]) -> Formula:
        rng = self.rng
        self._budget -= 1
        if not avail:
            # Nothing to talk about yet: force a quantifier (depth permitting).
            if depth == 0:
                v = self.config.variables[0]
                return Eq(v, v) if rng.random() < 0.5 else Not(Eq(v, v))
            return self._quantifier(depth, avail)
        if self._budget <= 0 or rng.random() < self.config.p_atom:
            atom = self._atom(avail)
            return Not(atom) if rng.random() < 0.3 else atom
        choices = ["not", "and", "or", "implies", "iff"]
        if depth > 0:
            choices += ["quant"] * 4
        op = rng.choice(choices)
        if op == "not":
            return Not(self._formula(depth, avail))
        if op == "quant":
            return self._quantifier(depth, avail)
        left, right = self._formula(depth, avail), self._formula(depth, avail)
        if op == "and":
            return And((left, right))
        if op == "or":
            return Or((left, right))
        if op == "implies":
            return Implies(left, right)
        return Iff(left, right)

    def _quantifier(self, depth: int, avail: set[str]) -> Formula:
        rng, rank = self.rng, self.config.rank
        v = rng.choice(self.config.variables)
        body = self._formula(depth - 1, avail | {v})
        kinds = ["exists", "forall", "count"] + (["exact"] if rank >= 2 else [])
        kind = rng.choice(kinds)
        if kind == "exists":
            return Exists(v, body)
        if kind == "forall":
            return Forall(v, body)
        if kind == "count":
            return CountExists(rng.randint(1, rank), v, body)
        return CountExistsExact(rng.randint(0, rank - 1), v, body)


def random_formulas(config: GeneratorConfig, count: int, seed: int) -> list[Formula]:
    gen = FormulaGenerator(config, seed)
    return [gen.sample() for _ in range(count)]
