"""Newton-Raphson, the mean-iterate method, and certified end-to-end solving."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .certify import (
    DEFAULT_BUDGET,
    DEFAULT_ROOT_TOL,
    Certificate,
    Side,
    Verdict,
    check_theorem,
    isolate_root,
)
from .errors import DerivativeZero, DomainError, PreconditionError
from .expr import Expression, eval_jet2, evaluate
from .interval import Interval


@dataclass(frozen=True)
class SolverConfig:
    max_iter: int = 100
    xtol: float = 1e-12
    ftol: float = 1e-13
    cycle_window: int = 8
    cycle_tol: float = 1e-10
    derivative_floor: float = 1e-300
    # let certified_solve iterate even without a certificate
    advisory: bool = False

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.cycle_window < 4:
            raise ValueError("cycle_window must be >= 4")
        for name in ("xtol", "ftol", "cycle_tol", "derivative_floor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


class Method(str, Enum):
    NEWTON = "Newton"
    MEAN_ITERATE = "MeanIterate"


class TerminationKind(str, Enum):
    CONVERGED = "Converged"
    MAX_ITER = "MaxIter"
    DERIVATIVE_ZERO = "DerivativeZero"
    CYCLE_DETECTED = "CycleDetected"
    LEFT_DOMAIN = "LeftDomain"
    DOMAIN_ERROR = "DomainError"
    REFUSED = "Refused"


@dataclass(frozen=True)
class Termination:
    kind: TerminationKind
    period: int | None = None
    cycle_points: tuple[float, ...] | None = None
    message: str | None = None

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind.value}
        if self.kind is TerminationKind.CYCLE_DETECTED:
            d["detail"] = {"period": self.period, "points": list(self.cycle_points)}
        elif self.message is not None:
            d["detail"] = self.message
        return d


def _num(v: float):
    return v if math.isfinite(v) else None


@dataclass
class IterationTrace:
    method: Method
    x0: float
    iterates: list[float]
    residuals: list[float]
    termination: Termination
    advisory: bool = False

    @property
    def iterations(self) -> int:
        return len(self.iterates) - 1

    @property
    def final(self) -> float:
        return self.iterates[-1]

    @property
    def converged(self) -> bool:
        return self.termination.kind is TerminationKind.CONVERGED

    def to_dict(self) -> dict:
        d = {
            "method": self.method.value,
            "x0": self.x0,
            "iterates": [_num(v) for v in self.iterates],
            "residuals": [_num(v) for v in self.residuals],
            "termination": self.termination.to_dict(),
            "iterations": self.iterations,
            "final": _num(self.final),
        }
        if self.advisory:
            d["advisory"] = True
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "x", "f"])
        for n, (x, r) in enumerate(zip(self.iterates, self.residuals)):
            w.writerow([n, f"{x:.17g}", f"{r:.17g}"])
        return buf.getvalue()


# single steps -------------------------------------------------------------------


def _ratio(e: Expression, x: float, floor: float) -> float:
    j = eval_jet2(e, x)
    if abs(j.d1) <= floor:
        raise DerivativeZero(x, j.d1)
    return j.value / j.d1


def newton_step(e: Expression, x: float, floor: float = 1e-300) -> float:
    """``x - f(x)/f'(x)``; raises DerivativeZero when ``|f'(x)| <= floor``."""
    return x - _ratio(e, x, floor)


def damped_transform(e: Expression, x: float, floor: float = 1e-300) -> float:
    """``F(x) = x - 2 f(x)/f'(x)``.

    The mean iterate ``(x + F(x))/2`` of this map is the Newton step, which
    is how the mean-iterate convergence conditions transfer to Newton.
    """
    return x - 2.0 * _ratio(e, x, floor)


# cycle detection ----------------------------------------------------------------


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a))


def detect_cycle(window, tol: float) -> tuple[int, tuple[float, ...]] | None:
    """Smallest period p in [2, len/2] with ``window[i] ~ window[i+p]`` for all i.

    Returns None when any two consecutive values agree within ``tol``: that
    pattern is convergence, not cycling.
    """
    w = list(window)
    if len(w) < 4:
        raise ValueError("cycle detection needs a window of at least 4 values")
    if any(_close(a, b, tol) for a, b in zip(w, w[1:])):
        return None
    for p in range(2, len(w) // 2 + 1):
        if all(_close(w[i], w[i + p], tol) for i in range(len(w) - p)):
            return p, tuple(w[:p])
    return None


# iteration driver ---------------------------------------------------------------


def _safe(fn: Callable[[float], float], x: float) -> float:
    try:
        return fn(x)
    except DomainError:
        return math.nan


def _drive(
    method: Method,
    step: Callable[[float], float],
    residual: Callable[[float], float],
    x0: float,
    cfg: SolverConfig,
    domain: Interval | None,
) -> IterationTrace:
    if not math.isfinite(x0):
        raise PreconditionError("x0 must be finite")
    if domain is not None and x0 not in domain:
        raise PreconditionError(f"x0={x0!r} is outside the domain {domain}")

    xs: list[float] = [x0]
    rs: list[float] = []

    def done(kind: TerminationKind, **kw) -> IterationTrace:
        return IterationTrace(method, x0, xs, rs, Termination(kind, **kw))

    try:
        rs.append(residual(x0))
    except DomainError as exc:
        rs.append(math.nan)
        return done(TerminationKind.DOMAIN_ERROR, message=str(exc))

    x, r = x0, rs[0]
    for _ in range(cfg.max_iter):
        try:
            x_new = step(x)
        except DerivativeZero as exc:
            return done(TerminationKind.DERIVATIVE_ZERO, message=str(exc))
        except DomainError as exc:
            return done(TerminationKind.DOMAIN_ERROR, message=str(exc))
        if not math.isfinite(x_new):
            return done(TerminationKind.DOMAIN_ERROR, message=f"step produced {x_new!r}")
        if domain is not None and x_new not in domain:
            xs.append(x_new)
            rs.append(_safe(residual, x_new))
            return done(TerminationKind.LEFT_DOMAIN, message=f"{x_new!r} is outside {domain}")
        try:
            r_new = residual(x_new)
        except DomainError as exc:
            xs.append(x_new)
            rs.append(math.nan)
            return done(TerminationKind.DOMAIN_ERROR, message=str(exc))

        small_step = abs(x_new - x) <= cfg.xtol * max(1.0, abs(x_new))
        if small_step and abs(r_new) <= cfg.ftol:
            # at the rounding floor a further step need not improve f; keep
            # the better of the last two points
            if abs(r_new) < abs(r):
                xs.append(x_new)
                rs.append(r_new)
            return done(TerminationKind.CONVERGED)

        xs.append(x_new)
        rs.append(r_new)
        x, r = x_new, r_new
        if len(xs) >= cfg.cycle_window:
            cycle = detect_cycle(xs[-cfg.cycle_window :], cfg.cycle_tol)
            if cycle is not None:
                return done(TerminationKind.CYCLE_DETECTED, period=cycle[0], cycle_points=cycle[1])
    return done(TerminationKind.MAX_ITER)


def newton_solve(
    e: Expression,
    x0: float,
    cfg: SolverConfig = SolverConfig(),
    domain: Interval | None = None,
) -> IterationTrace:
    """Iterate Newton's method from ``x0`` and record every iterate.

    Converged means the last Newton step was at most ``xtol*max(1,|x|)`` and
    ``|f| <= ftol`` at the final iterate.  Leaving ``domain`` terminates the
    run (no clamping).
    """
    return _drive(
        Method.NEWTON,
        lambda x: newton_step(e, x, cfg.derivative_floor),
        lambda x: evaluate(e, x),
        x0,
        cfg,
        domain,
    )


def mean_iterate_solve(
    e: Expression,
    x0: float,
    cfg: SolverConfig = SolverConfig(),
    domain: Interval | None = None,
) -> IterationTrace:
    """Iterate ``x <- (x + e(x))/2`` toward a fixed point of ``e``.

    Residuals are the fixed-point residuals ``e(x) - x``.
    """

    def step(x: float) -> float:
        return 0.5 * (x + evaluate(e, x))

    return _drive(Method.MEAN_ITERATE, step, lambda x: evaluate(e, x) - x, x0, cfg, domain)


def refused_trace(e: Expression, x0: float) -> IterationTrace:
    return IterationTrace(
        Method.NEWTON,
        x0,
        [x0],
        [_safe(lambda x: evaluate(e, x), x0)],
        Termination(TerminationKind.REFUSED, message="no side of the bracket was certified"),
    )


# certified solve ----------------------------------------------------------------


def certified_solve(
    e: Expression,
    bracket: Interval,
    cfg: SolverConfig = SolverConfig(),
    budget: int = DEFAULT_BUDGET,
    root_tol: float = DEFAULT_ROOT_TOL,
) -> tuple[Certificate, IterationTrace]:
    """Certify one side of the root in ``bracket`` and run Newton from its far end.

    The left side is tried first.  Without a certified side the better
    certificate is returned with a refusal trace, unless ``cfg.advisory``
    is set, in which case Newton runs anyway and the trace is tagged.
    """
    root = isolate_root(e, bracket, root_tol)
    candidates = []
    if bracket.lo < root.lo:
        candidates.append(check_theorem(e, Side.LEFT, bracket.lo, root, budget))
    if root.hi < bracket.hi:
        candidates.append(check_theorem(e, Side.RIGHT, bracket.hi, root, budget))
    if not candidates:
        raise PreconditionError("the bracket is no wider than the root enclosure")

    for cert in candidates:
        if cert.verdict is Verdict.CERTIFIED:
            return cert, newton_solve(e, cert.outer, cfg, cert.interval)

    # max() keeps the first of equal ranks, so Left wins ties
    best = max(candidates, key=lambda c: c.verdict.rank)
    if cfg.advisory:
        trace = newton_solve(e, best.outer, cfg)
        trace.advisory = True
        return best, trace
    return best, refused_trace(e, best.outer)
