"""First-order formulas: syntax, parsing, evaluation and named builders."""

from .evaluate import Compiled, Structure, compile_formula, evaluate
from .named import (
    RelSymbol,
    beta,
    block,
    col_symbol,
    congruence,
    congruence_symbol,
    diagonal,
    diagonal_symbol,
    gamma,
    iota,
    lightlike,
    lightlike_symbol,
    point_formula,
    theta,
    theta_Delta,
    theta_R,
)
from .syntax import (
    Add,
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Le,
    Mul,
    Not,
    One,
    Or,
    RelApp,
    Sub,
    Term,
    Var,
    Zero,
    free_vars,
    parse,
    pretty,
    pretty_print,
    substitute,
)

eval_formula = evaluate

__all__ = [name for name in dir() if not name.startswith("_")]
