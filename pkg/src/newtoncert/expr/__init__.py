"""One-variable real expressions: parsing, evaluation and differentiation."""

from .diff import differentiate, nth_derivative
from .evaluate import Jet2, eval_interval, eval_jet2, evaluate
from .nodes import (
    Binary,
    Constant,
    Expression,
    Guard,
    Piecewise,
    Unary,
    Variable,
    format_expr,
)
from .parser import parse

# `eval` is the name used throughout the docs; it shadows the builtin only
# inside this namespace.
eval = evaluate  # noqa: A001

__all__ = [
    "Binary",
    "Constant",
    "Expression",
    "Guard",
    "Jet2",
    "Piecewise",
    "Unary",
    "Variable",
    "differentiate",
    "eval",
    "eval_interval",
    "eval_jet2",
    "evaluate",
    "format_expr",
    "nth_derivative",
    "parse",
]
