from .evaluator import Evaluator, classify, evaluate, evaluate_naive
from .generate import FormulaGenerator, GeneratorConfig, random_formulas
from .normal_form import Disjunct, NormalForm, RelationKind, normalize_c2, relation_formula
from .parser import FormulaSyntaxError, parse_formula
from .syntax import (
    And,
    CountExists,
    CountExistsExact,
    Edge,
    Eq,
    Exists,
    Forall,
    Formula,
    FormulaError,
    FormulaMetrics,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    conj,
    desugar,
    disj,
    free_vars,
    metrics,
    neq,
    nnf,
    swap_xy,
    to_text,
)

__all__ = [
    "And",
    "CountExists",
    "CountExistsExact",
    "Disjunct",
    "Edge",
    "Eq",
    "Evaluator",
    "Exists",
    "Forall",
    "Formula",
    "FormulaError",
    "FormulaGenerator",
    "FormulaMetrics",
    "FormulaSyntaxError",
    "GeneratorConfig",
    "Iff",
    "Implies",
    "Not",
    "NormalForm",
    "Or",
    "Pred",
    "RelationKind",
    "classify",
    "conj",
    "desugar",
    "disj",
    "evaluate",
    "evaluate_naive",
    "free_vars",
    "metrics",
    "neq",
    "nnf",
    "normalize_c2",
    "parse_formula",
    "random_formulas",
    "relation_formula",
    "swap_xy",
    "to_text",
]
