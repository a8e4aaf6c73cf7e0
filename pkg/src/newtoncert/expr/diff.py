"""Symbolic differentiation with light simplification."""

from __future__ import annotations

from .evaluate import exponent_of
from .nodes import (
    ONE,
    ZERO,
    Binary,
    Constant,
    Expression,
    Piecewise,
    Unary,
    Variable,
    add,
    div,
    func,
    mul,
    neg,
    power,
    sub,
)


def _d_unary(op: str, u: Expression, du: Expression) -> Expression:
    if op == "neg":
        return neg(du)
    if op == "sin":
        outer = func("cos", u)
    elif op == "cos":
        outer = neg(func("sin", u))
    elif op == "tan":
        outer = add(ONE, power(func("tan", u), Constant(2.0)))
    elif op == "exp":
        outer = func("exp", u)
    elif op == "log":
        return div(du, u)
    elif op == "sqrt":
        return div(du, mul(Constant(2.0), func("sqrt", u)))
    elif op == "abs":
        # u/|u| is undefined at u = 0, so the kink surfaces as a DomainError
        outer = div(u, func("abs", u))
    else:
        raise ValueError(f"unknown function {op!r}")
    return mul(outer, du)


def differentiate(e: Expression) -> Expression:
    """d/dx of ``e``; piecewise expressions differentiate branch by branch."""
    if isinstance(e, Constant):
        return ZERO
    if isinstance(e, Variable):
        return ONE
    if isinstance(e, Unary):
        return _d_unary(e.op, e.arg, differentiate(e.arg))
    if isinstance(e, Binary):
        a, b = e.left, e.right
        if e.op == "pow":
            p, _ = exponent_of(e)
            return mul(mul(Constant(p), power(a, Constant(p - 1.0))), differentiate(a))
        da, db = differentiate(a), differentiate(b)
        if e.op == "add":
            return add(da, db)
        if e.op == "sub":
            return sub(da, db)
        if e.op == "mul":
            return add(mul(da, b), mul(a, db))
        # (a/b)' = (a'b - ab') / b^2
        return div(sub(mul(da, b), mul(a, db)), power(b, Constant(2.0)))
    if isinstance(e, Piecewise):
        return Piecewise(
            tuple((guard, differentiate(branch)) for guard, branch in e.branches),
            differentiate(e.otherwise),
        )
    raise TypeError(f"not an expression: {e!r}")


def nth_derivative(e: Expression, order: int) -> Expression:
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    for _ in range(order):
        e = differentiate(e)
    return e
