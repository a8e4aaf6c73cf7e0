"""Expression AST, simplifying constructors and the pretty-printer."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

UNARY_OPS = ("neg", "sin", "cos", "tan", "exp", "log", "sqrt", "abs")
FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "abs")
BINARY_OPS = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}
COMPARISONS = ("<", "<=", ">", ">=")


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Variable:
    name: str = "x"


@dataclass(frozen=True)
class Unary:
    op: str
    arg: Expression


@dataclass(frozen=True)
class Binary:
    op: str
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Guard:
    """The comparison ``x <op> threshold``; threshold is a constant expression."""

    op: str
    threshold: Expression

    def holds(self, x: float) -> bool:
        t = constant_value(self.threshold)
        if self.op == "<":
            return x < t
        if self.op == "<=":
            return x <= t
        if self.op == ">":
            return x > t
        return x >= t


@dataclass(frozen=True)
class Piecewise:
    branches: tuple[tuple[Guard, Expression], ...]
    otherwise: Expression


Expression = Union[Constant, Variable, Unary, Binary, Piecewise]

X = Variable()
ZERO = Constant(0.0)
ONE = Constant(1.0)


def has_variable(e: Expression) -> bool:
    if isinstance(e, Variable):
        return True
    if isinstance(e, Constant):
        return False
    if isinstance(e, Unary):
        return has_variable(e.arg)
    if isinstance(e, Binary):
        return has_variable(e.left) or has_variable(e.right)
    return True


def constant_value(e: Expression) -> float:
    """Value of a variable-free expression."""
    from .evaluate import evaluate

    if isinstance(e, Constant):
        return e.value
    return evaluate(e, 0.0)


def _is_const(e: Expression, v: float | None = None) -> bool:
    return isinstance(e, Constant) and (v is None or e.value == v)


def _fold(value: float, fallback: Expression) -> Expression:
    return Constant(value) if math.isfinite(value) else fallback


# simplifying constructors: constant folding and 0/1 identities only


def neg(a: Expression) -> Expression:
    if isinstance(a, Constant):
        return Constant(-a.value)
    if isinstance(a, Unary) and a.op == "neg":
        return a.arg
    return Unary("neg", a)


def add(a: Expression, b: Expression) -> Expression:
    if _is_const(a) and _is_const(b):
        return _fold(a.value + b.value, Binary("add", a, b))
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Binary("add", a, b)


def sub(a: Expression, b: Expression) -> Expression:
    if _is_const(a) and _is_const(b):
        return _fold(a.value - b.value, Binary("sub", a, b))
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    return Binary("sub", a, b)


def mul(a: Expression, b: Expression) -> Expression:
    if _is_const(a) and _is_const(b):
        return _fold(a.value * b.value, Binary("mul", a, b))
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if _is_const(a, -1.0):
        return neg(b)
    if _is_const(b, -1.0):
        return neg(a)
    if _is_const(a) and isinstance(b, Binary) and b.op == "mul" and _is_const(b.left):
        # c1*(c2*u) -> (c1*c2)*u, which keeps repeated derivatives readable
        return mul(mul(a, b.left), b.right)
    return Binary("mul", a, b)


def div(a: Expression, b: Expression) -> Expression:
    if _is_const(a) and _is_const(b) and b.value != 0.0:
        return _fold(a.value / b.value, Binary("div", a, b))
    if _is_const(a, 0.0):
        return ZERO
    if _is_const(b, 1.0):
        return a
    return Binary("div", a, b)


def power(a: Expression, b: Expression) -> Expression:
    if _is_const(b, 1.0):
        return a
    if _is_const(b, 0.0):
        return ONE
    if _is_const(a) and _is_const(b):
        try:
            return _fold(a.value**b.value, Binary("pow", a, b))
        except (OverflowError, ZeroDivisionError):
            return Binary("pow", a, b)
    return Binary("pow", a, b)


def func(name: str, a: Expression) -> Expression:
    return Unary(name, a)


# pretty-printer ---------------------------------------------------------

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "pow": 3}
_NEG_PREC = 4
_ATOM_PREC = 5


def format_number(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _prec(e: Expression) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary) and e.op == "neg":
        return _NEG_PREC
    if isinstance(e, Constant) and (e.value < 0 or str(e.value).startswith("-")):
        return _NEG_PREC
    return _ATOM_PREC


def _paren(s: str) -> str:
    return f"({s})"


def format_expr(e: Expression) -> str:
    """Render ``e`` in the input grammar with minimal parentheses.

    ``parse(format_expr(e))`` is structurally equal to ``e`` for every
    expression produced by the parser.
    """
    if isinstance(e, Constant):
        return format_number(e.value)
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, Unary):
        inner = format_expr(e.arg)
        if e.op == "neg":
            return "-" + (inner if _prec(e.arg) == _ATOM_PREC else _paren(inner))
        return f"{e.op}({inner})"
    if isinstance(e, Binary):
        p = _PREC[e.op]
        left, right = format_expr(e.left), format_expr(e.right)
        if e.op == "pow":
            if _prec(e.left) < _ATOM_PREC:
                left = _paren(left)
            if _prec(e.right) < p:
                right = _paren(right)
        else:
            if _prec(e.left) < p:
                left = _paren(left)
            if _prec(e.right) <= p or right.startswith("-"):
                right = _paren(right)
        return f"{left}{BINARY_OPS[e.op]}{right}"
    if isinstance(e, Piecewise):
        out = format_expr(e.otherwise)
        for guard, branch in reversed(e.branches):
            cond = f"x{guard.op}{format_expr(guard.threshold)}"
            out = f"if({cond}, {format_expr(branch)}, {out})"
        return out
    raise TypeError(f"not an expression: {e!r}")
