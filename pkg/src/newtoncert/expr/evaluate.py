"""Point, second-order jet and interval evaluation of expression trees."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .. import interval as iv
from ..errors import DomainError
from ..interval import Interval
from .nodes import (
    Binary,
    Constant,
    Expression,
    Guard,
    Piecewise,
    Unary,
    Variable,
    has_variable,
)


def _finite(v: float, what: str) -> float:
    if not math.isfinite(v):
        raise DomainError(f"{what} is not finite ({v!r})")
    return v


def exponent_of(node: Binary) -> tuple[float, bool]:
    """The constant exponent of a pow node and whether it is an integer."""
    p = evaluate(node.right, 0.0)
    return p, p.is_integer() and abs(p) <= 2**31


def _pow_real(u: float, p: float, integral: bool) -> float:
    if integral:
        if u == 0.0 and p < 0:
            raise DomainError("zero raised to a negative power")
        try:
            return math.pow(u, p)
        except OverflowError as exc:
            raise DomainError("pow overflows") from exc
    if u <= 0.0:
        raise DomainError(f"non-integer power of non-positive base {u!r}")
    try:
        return math.pow(u, p)
    except OverflowError as exc:
        raise DomainError("pow overflows") from exc


def _log(u: float) -> float:
    if u <= 0.0:
        raise DomainError(f"log of non-positive value {u!r}")
    return math.log(u)


def _sqrt(u: float) -> float:
    if u < 0.0:
        raise DomainError(f"sqrt of negative value {u!r}")
    return math.sqrt(u)


def _exp(u: float) -> float:
    try:
        return math.exp(u)
    except OverflowError as exc:
        raise DomainError(f"exp({u!r}) overflows") from exc


def _tan(u: float) -> float:
    return math.tan(u)


_REAL: dict[str, Callable[[float], float]] = {
    "neg": lambda u: -u,
    "sin": math.sin,
    "cos": math.cos,
    "tan": _tan,
    "exp": _exp,
    "log": _log,
    "sqrt": _sqrt,
    "abs": abs,
}


def _select(e: Piecewise, x: float) -> Expression:
    for guard, branch in e.branches:
        if guard.holds(x):
            return branch
    return e.otherwise


def evaluate(e: Expression, x: float) -> float:
    """Evaluate ``e`` at ``x`` in double precision.

    Raises DomainError for log/sqrt/pow outside their domain, division by
    zero, and any non-finite intermediate.
    """
    if isinstance(e, Constant):
        return e.value
    if isinstance(e, Variable):
        return x
    if isinstance(e, Unary):
        return _finite(_REAL[e.op](evaluate(e.arg, x)), e.op)
    if isinstance(e, Binary):
        a = evaluate(e.left, x)
        if e.op == "pow":
            p, integral = exponent_of(e)
            return _finite(_pow_real(a, p, integral), "pow")
        b = evaluate(e.right, x)
        if e.op == "add":
            return _finite(a + b, "sum")
        if e.op == "sub":
            return _finite(a - b, "difference")
        if e.op == "mul":
            return _finite(a * b, "product")
        if b == 0.0:
            raise DomainError("division by zero")
        return _finite(a / b, "quotient")
    if isinstance(e, Piecewise):
        return evaluate(_select(e, x), x)
    raise TypeError(f"not an expression: {e!r}")


# second-order forward mode -------------------------------------------------


@dataclass(frozen=True)
class Jet2:
    """Value, first and second derivative of a function at one point."""

    value: float
    d1: float
    d2: float

    def chain(self, f0: float, f1: float, f2: float) -> Jet2:
        # (f o u)'' = f''(u) u'^2 + f'(u) u''
        return Jet2(f0, f1 * self.d1, f2 * self.d1 * self.d1 + f1 * self.d2)

    def __add__(self, o: Jet2) -> Jet2:
        return Jet2(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)

    def __sub__(self, o: Jet2) -> Jet2:
        return Jet2(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2)

    def __mul__(self, o: Jet2) -> Jet2:
        return Jet2(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        )

    def __truediv__(self, o: Jet2) -> Jet2:
        if o.value == 0.0:
            raise DomainError("division by zero")
        q = self.value / o.value
        q1 = (self.d1 - q * o.d1) / o.value
        q2 = (self.d2 - 2.0 * q1 * o.d1 - q * o.d2) / o.value
        return Jet2(q, q1, q2)

    def __neg__(self) -> Jet2:
        return Jet2(-self.value, -self.d1, -self.d2)


def _jet_unary(op: str, u: Jet2) -> Jet2:
    v = u.value
    if op == "neg":
        return -u
    if op == "sin":
        s, c = math.sin(v), math.cos(v)
        return u.chain(s, c, -s)
    if op == "cos":
        s, c = math.sin(v), math.cos(v)
        return u.chain(c, -s, -c)
    if op == "tan":
        t = math.tan(v)
        sec2 = 1.0 + t * t
        return u.chain(t, sec2, 2.0 * t * sec2)
    if op == "exp":
        ev = _exp(v)
        return u.chain(ev, ev, ev)
    if op == "log":
        lv = _log(v)
        return u.chain(lv, 1.0 / v, -1.0 / (v * v))
    if op == "sqrt":
        if v <= 0.0:
            raise DomainError(f"sqrt is not differentiable at {v!r}")
        s = math.sqrt(v)
        return u.chain(s, 0.5 / s, -0.25 / (s * v))
    if op == "abs":
        if v == 0.0:
            raise DomainError("abs is not differentiable at 0")
        sign = 1.0 if v > 0 else -1.0
        return u.chain(abs(v), sign, 0.0)
    raise ValueError(f"unknown function {op!r}")


def _jet_pow(u: Jet2, p: float, integral: bool) -> Jet2:
    v = u.value
    f0 = _pow_real(v, p, integral)
    f1 = 0.0 if p == 0 else p * _pow_real(v, p - 1, integral)
    f2 = 0.0 if p in (0.0, 1.0) else p * (p - 1) * _pow_real(v, p - 2, integral)
    return u.chain(f0, f1, f2)


def _jet(e: Expression, x: float) -> Jet2:
    if isinstance(e, Constant):
        return Jet2(e.value, 0.0, 0.0)
    if isinstance(e, Variable):
        return Jet2(x, 1.0, 0.0)
    if isinstance(e, Unary):
        return _jet_unary(e.op, _jet(e.arg, x))
    if isinstance(e, Binary):
        a = _jet(e.left, x)
        if e.op == "pow":
            return _jet_pow(a, *exponent_of(e))
        b = _jet(e.right, x)
        if e.op == "add":
            return a + b
        if e.op == "sub":
            return a - b
        if e.op == "mul":
            return a * b
        return a / b
    if isinstance(e, Piecewise):
        return _jet(_select(e, x), x)
    raise TypeError(f"not an expression: {e!r}")


def eval_jet2(e: Expression, x: float) -> Jet2:
    """``(f(x), f'(x), f''(x))`` by second-order forward-mode propagation.

    At a piecewise threshold the branch chosen by the guard supplies all
    three components, which gives one-sided derivatives at branch edges.
    """
    j = _jet(e, x)
    for name, v in (("value", j.value), ("first derivative", j.d1), ("second derivative", j.d2)):
        _finite(v, name)
    return j


# interval extension ---------------------------------------------------------

_INTERVAL: dict[str, Callable[[Interval], Interval]] = {
    "neg": lambda u: -u,
    "sin": iv.isin,
    "cos": iv.icos,
    "tan": iv.itan,
    "exp": iv.iexp,
    "log": iv.ilog,
    "sqrt": iv.isqrt,
    "abs": iv.iabs,
}


def _guard_split(guard: Guard, X: Interval) -> tuple[Interval | None, Interval | None]:
    """Closed hulls of the parts of X where the guard holds / fails."""
    t = evaluate(guard.threshold, 0.0)
    if guard.op in ("<", "<="):
        strict_true = guard.op == "<"
        true_part = _clip(X.lo, min(X.hi, t), X.lo < t if strict_true else X.lo <= t)
        false_part = _clip(max(X.lo, t), X.hi, X.hi >= t if strict_true else X.hi > t)
    else:
        strict_true = guard.op == ">"
        true_part = _clip(max(X.lo, t), X.hi, X.hi > t if strict_true else X.hi >= t)
        false_part = _clip(X.lo, min(X.hi, t), X.lo <= t if strict_true else X.lo < t)
    return true_part, false_part


def _clip(lo: float, hi: float, nonempty: bool) -> Interval | None:
    return Interval(lo, hi) if nonempty and lo <= hi else None


def _iv(e: Expression, X: Interval, refine: bool = True) -> Interval:
    natural = _iv_node(e, X, refine)
    if not refine or X.lo == X.hi or not X.is_finite() or not _monotone_candidate(e):
        return natural
    return _monotone_refine(e, X, natural)


def _monotone_candidate(e: Expression) -> bool:
    return isinstance(e, (Unary, Binary)) and _smooth_in_x(e)


@lru_cache(maxsize=4096)
def _smooth_in_x(e: Expression) -> bool:
    """True when e depends on x and has no piecewise node (hence no jumps)."""
    return has_variable(e) and not _has_piecewise(e)


def _has_piecewise(e: Expression) -> bool:
    if isinstance(e, Piecewise):
        return True
    if isinstance(e, Unary):
        return _has_piecewise(e.arg)
    if isinstance(e, Binary):
        return _has_piecewise(e.left) or _has_piecewise(e.right)
    return False


@lru_cache(maxsize=4096)
def _derivative(e: Expression) -> Expression:
    from .diff import differentiate

    return differentiate(e)


def _monotone_refine(e: Expression, X: Interval, natural: Interval) -> Interval:
    # a continuous function whose derivative enclosure excludes 0 is monotone
    # on X, so its range is spanned by the endpoint values
    try:
        slope = _iv(_derivative(e), X, refine=False)
    except DomainError:
        return natural
    if slope.lo <= 0.0 <= slope.hi:
        return natural
    ends = _iv(e, Interval.point(X.lo), False).hull(_iv(e, Interval.point(X.hi), False))
    lo, hi = max(natural.lo, ends.lo), min(natural.hi, ends.hi)
    return Interval(lo, hi) if lo <= hi else natural


def _iv_node(e: Expression, X: Interval, refine: bool) -> Interval:
    if isinstance(e, Constant):
        return Interval.point(e.value)
    if isinstance(e, Variable):
        return X
    if isinstance(e, Unary):
        return _INTERVAL[e.op](_iv(e.arg, X, refine))
    if isinstance(e, Binary):
        a = _iv(e.left, X, refine)
        if e.op == "pow":
            p, integral = exponent_of(e)
            return iv.ipow_int(a, int(p)) if integral else iv.ipow_real(a, p)
        b = _iv(e.right, X, refine)
        if e.op == "add":
            return a + b
        if e.op == "sub":
            return a - b
        if e.op == "mul":
            return a * b
        return a / b
    if isinstance(e, Piecewise):
        result = None
        rest: Interval | None = X
        for guard, branch in e.branches:
            if rest is None:
                break
            part, rest = _guard_split(guard, rest)
            if part is not None:
                r = _iv(branch, part, refine)
                result = r if result is None else result.hull(r)
        if rest is not None:
            r = _iv(e.otherwise, rest, refine)
            result = r if result is None else result.hull(r)
        return result
    raise TypeError(f"not an expression: {e!r}")


def eval_interval(e: Expression, X: Interval) -> Interval:
    """Natural interval extension of ``e`` over ``X`` with outward rounding.

    The result encloses ``{e(x) : x in X}``.  Subexpressions without piecewise
    nodes whose derivative enclosure excludes zero are tightened to the hull of
    their endpoint values.  Raises DomainError when X leaves the domain of
    some subexpression.
    """
    return _iv(e, X)
