"""Closed real intervals with outward rounding.

Every elementary operation computes its endpoints in round-to-nearest and then
steps them outward with ``math.nextafter``: one ulp for the IEEE basic
operations and sqrt, two ulps for libm functions (exp, log, sin, cos, tan,
pow) whose results are not guaranteed to be correctly rounded.  Results that
are exact by construction (negation, abs, products/sums with an exact zero)
are not widened.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

INF = math.inf
TWO_PI = 2.0 * math.pi


def _down(v: float, n: int = 1) -> float:
    for _ in range(n):
        v = math.nextafter(v, -INF)
    return v


def _up(v: float, n: int = 1) -> float:
    for _ in range(n):
        v = math.nextafter(v, INF)
    return v


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: float) -> Interval:
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        if math.isinf(self.lo) or math.isinf(self.hi):
            raise ValueError("midpoint of an unbounded interval")
        m = 0.5 * self.lo + 0.5 * self.hi
        return min(max(m, self.lo), self.hi)

    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def __contains__(self, x: float) -> bool:
        return self.contains(x)

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def split(self) -> tuple[Interval, Interval]:
        m = self.mid
        return Interval(self.lo, m), Interval(m, self.hi)

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}

    # arithmetic -------------------------------------------------------

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo)

    def __add__(self, other: Interval) -> Interval:
        other = _coerce(other)
        if self.lo == self.hi == 0.0:
            return other
        if other.lo == other.hi == 0.0:
            return self
        return _checked(_down(self.lo + other.lo), _up(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other: Interval) -> Interval:
        return self + (-_coerce(other))

    def __rsub__(self, other: Interval) -> Interval:
        return _coerce(other) - self

    def __mul__(self, other: Interval) -> Interval:
        other = _coerce(other)
        if self.lo == self.hi == 0.0 or other.lo == other.hi == 0.0:
            return Interval(0.0, 0.0)
        products = [
            _mul0(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)
        ]
        return _checked(_down(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other: Interval) -> Interval:
        other = _coerce(other)
        if other.contains_zero():
            raise DomainError(f"division by an interval containing zero {other}")
        if self.lo == self.hi == 0.0:
            return Interval(0.0, 0.0)
        quotients = [a / b for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return _checked(_down(min(quotients)), _up(max(quotients)))

    def __rtruediv__(self, other: Interval) -> Interval:
        return _coerce(other) / self


def _coerce(v) -> Interval:
    if isinstance(v, Interval):
        return v
    return Interval.point(float(v))


def _mul0(a: float, b: float) -> float:
    # 0 * inf is taken as 0: the endpoint is an exact zero, not a limit
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def _checked(lo: float, hi: float) -> Interval:
    if math.isnan(lo) or math.isnan(hi):
        raise DomainError("interval operation produced NaN")
    return Interval(lo, hi)


def _finite(lo: float, hi: float, what: str) -> Interval:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError(f"{what} overflows")
    return Interval(lo, hi)


# elementary functions ---------------------------------------------------


def iabs(x: Interval) -> Interval:
    if x.lo >= 0.0:
        return x
    if x.hi <= 0.0:
        return -x
    return Interval(0.0, max(-x.lo, x.hi))


def isqrt(x: Interval) -> Interval:
    if x.lo < 0.0:
        raise DomainError(f"sqrt of an interval reaching below zero {x}")
    return Interval(max(0.0, _down(math.sqrt(x.lo))), _up(math.sqrt(x.hi)))


def iexp(x: Interval) -> Interval:
    try:
        lo = math.exp(x.lo)
        hi = math.exp(x.hi)
    except OverflowError as exc:
        raise DomainError(f"exp overflows on {x}") from exc
    return _finite(max(0.0, _down(lo, 2)), _up(hi, 2), "exp")


def ilog(x: Interval) -> Interval:
    if x.lo <= 0.0:
        raise DomainError(f"log of an interval reaching zero or below {x}")
    return Interval(_down(math.log(x.lo), 2), _up(math.log(x.hi), 2))


def _has_critical(x: Interval, phase: float, period: float) -> bool:
    """Is there a point ``phase + k*period`` in ``x`` (with a safety margin)?"""
    slack = 1e-12 * max(1.0, abs(x.lo), abs(x.hi))
    k = math.ceil((x.lo - slack - phase) / period)
    return phase + k * period <= x.hi + slack


def _sincos(x: Interval, fn, max_phase: float, min_phase: float) -> Interval:
    if not x.is_finite() or x.width >= TWO_PI:
        return Interval(-1.0, 1.0)
    a, b = fn(x.lo), fn(x.hi)
    lo = _down(min(a, b), 2)
    hi = _up(max(a, b), 2)
    if _has_critical(x, max_phase, TWO_PI):
        hi = 1.0
    if _has_critical(x, min_phase, TWO_PI):
        lo = -1.0
    return Interval(max(lo, -1.0), min(hi, 1.0))


def isin(x: Interval) -> Interval:
    return _sincos(x, math.sin, 0.5 * math.pi, 1.5 * math.pi)


def icos(x: Interval) -> Interval:
    return _sincos(x, math.cos, 0.0, math.pi)


def itan(x: Interval) -> Interval:
    if not x.is_finite() or x.width >= math.pi or _has_critical(x, 0.5 * math.pi, math.pi):
        raise DomainError(f"tan has a pole in {x}")
    return _finite(_down(math.tan(x.lo), 2), _up(math.tan(x.hi), 2), "tan")


def _pow_abs(v: float, n: int) -> float:
    try:
        return math.pow(v, n)
    except OverflowError:
        return INF


def ipow_int(x: Interval, n: int) -> Interval:
    """``x**n`` for an integer ``n``, using monotone pieces (tight for even n)."""
    if n == 0:
        return Interval(1.0, 1.0)
    if n == 1:
        return x
    if n < 0:
        return Interval(1.0, 1.0) / ipow_int(x, -n)
    a, b = _pow_abs(x.lo, n), _pow_abs(x.hi, n)
    if n % 2 == 1:
        return _finite(_down(a, 2), _up(b, 2), "pow")
    if x.lo >= 0.0:
        return _finite(max(0.0, _down(a, 2)), _up(b, 2), "pow")
    if x.hi <= 0.0:
        return _finite(max(0.0, _down(b, 2)), _up(a, 2), "pow")
    return _finite(0.0, _up(max(a, b), 2), "pow")


def ipow_real(x: Interval, p: float) -> Interval:
    """``x**p`` for a non-integer constant ``p``, routed through exp/log."""
    return iexp(Interval.point(p) * ilog(x))
