"""Rigorous checks of the global Newton convergence hypotheses on an interval.

A certificate for the left-hand case covers ``[a, c]`` where ``c`` is the
unique root of ``f`` there, and asserts on the closed interval up to the
root enclosure:

* C1  f * f''  >= 0
* C2  f * f'   <  0   (left)   or  > 0 (right)
* C3  f'       != 0
* C4  f        != 0   (so the root enclosed at the edge is unique)

The lemma variant checks the mean-iterate conditions for a fixed-point map
``f``: L1 ``f' >= -1``, L2 ``f(x) - x > 0`` (left) or ``< 0`` (right), and L3
``f(x) - x != 0`` away from the fixed point.

Every check is a sign verification by adaptive bisection with interval
arithmetic.  Certified and Refuted answers are sound under the outward
rounding model; Unknown only means the budget ran out.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError, NoSignChangeError, PreconditionError
from .expr import Expression, differentiate, eval_interval, evaluate
from .expr.nodes import ONE, X, add, mul, sub
from .interval import Interval

DEFAULT_BUDGET = 4096
DEFAULT_ROOT_TOL = 1e-12


class Verdict(str, Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"

    @property
    def rank(self) -> int:
        return {"Refuted": 0, "Unknown": 1, "Certified": 2}[self.value]


class SignRelation(str, Enum):
    GE0 = "GE0"
    GT0 = "GT0"
    LE0 = "LE0"
    LT0 = "LT0"
    NE0 = "NE0"

    def holds(self, v: float) -> bool:
        return {
            "GE0": v >= 0.0,
            "GT0": v > 0.0,
            "LE0": v <= 0.0,
            "LT0": v < 0.0,
            "NE0": v != 0.0,
        }[self.value]

    def proves(self, enc: Interval) -> bool:
        """Does every value in ``enc`` satisfy the relation?"""
        return {
            "GE0": enc.lo >= 0.0,
            "GT0": enc.lo > 0.0,
            "LE0": enc.hi <= 0.0,
            "LT0": enc.hi < 0.0,
            "NE0": enc.lo > 0.0 or enc.hi < 0.0,
        }[self.value]


class Side(str, Enum):
    LEFT = "Left"
    RIGHT = "Right"


@dataclass(frozen=True)
class SignCheck:
    verdict: Verdict
    witness: float | None = None
    witness_value: float | None = None
    effort: int = 1


def _enclose(e: Expression, J: Interval) -> Interval | None:
    try:
        return eval_interval(e, J)
    except DomainError:
        # the leaf may still split into pieces the extension can handle
        return None


def _refuting_point(e: Expression, J: Interval, rel: SignRelation):
    for x in (J.mid, J.lo, J.hi):
        v = evaluate(e, x)
        if not rel.holds(v):
            return x, v
    return None


def verify_sign(
    e: Expression, I: Interval, rel: SignRelation, budget: int = DEFAULT_BUDGET
) -> SignCheck:
    """Decide whether ``rel`` holds for ``e`` on all of ``I``.

    Leaves are split worst-first: the undecided leaf with the widest
    enclosure goes next (ties broken left to right), so the result is
    deterministic.  ``budget`` caps the number of leaves.
    """
    if budget < 1:
        raise PreconditionError("budget must be at least 1")
    if not I.is_finite():
        raise PreconditionError("sign verification needs a bounded interval")

    heap: list[tuple[float, float, float]] = []
    stuck = 0

    def visit(J: Interval) -> SignCheck | None:
        nonlocal stuck
        enc = _enclose(e, J)
        if enc is not None and rel.proves(enc):
            return None
        bad = _refuting_point(e, J, rel)
        if bad is not None:
            return SignCheck(Verdict.REFUTED, bad[0], bad[1])
        if J.lo < J.mid < J.hi:
            width = math.inf if enc is None else enc.width
            heapq.heappush(heap, (-width, J.lo, J.hi))
        else:
            stuck += 1
        return None

    leaves = 1
    found = visit(I)
    while found is None and heap:
        if leaves >= budget:
            return SignCheck(Verdict.UNKNOWN, effort=leaves)
        _, lo, hi = heapq.heappop(heap)
        leaves += 1
        for K in Interval(lo, hi).split():
            found = visit(K)
            if found is not None:
                break
    if found is not None:
        return SignCheck(found.verdict, found.witness, found.witness_value, leaves)
    if stuck:
        return SignCheck(Verdict.UNKNOWN, effort=leaves)
    return SignCheck(Verdict.CERTIFIED, effort=leaves)


# root isolation ---------------------------------------------------------------


@dataclass(frozen=True)
class RootEnclosure:
    """A narrow interval holding a root, with the sign of f at each end."""

    interval: Interval
    sign_left: int
    sign_right: int

    @property
    def width(self) -> float:
        return self.interval.width

    @property
    def lo(self) -> float:
        return self.interval.lo

    @property
    def hi(self) -> float:
        return self.interval.hi

    def to_dict(self) -> dict:
        return self.interval.to_dict()


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def _certified_sign(e: Expression, x: float) -> int:
    try:
        enc = eval_interval(e, Interval.point(x))
    except DomainError:
        return 0
    return 1 if enc.lo > 0 else -1 if enc.hi < 0 else 0


def isolate_root(e: Expression, search: Interval, tol: float = DEFAULT_ROOT_TOL) -> RootEnclosure:
    """Bracket a root of ``e`` inside ``search`` to width at most ``tol``.

    Bisects to a quarter of ``tol`` and then re-centres an enclosure of width
    0.9*tol on the result, so the root sits well inside and both endpoint
    signs can usually be confirmed by interval evaluation.
    """
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    a, b = search.lo, search.hi
    sa, sb = _sign(evaluate(e, a)), _sign(evaluate(e, b))
    if sa * sb >= 0:
        raise NoSignChangeError(f"no strict sign change of f over [{a!r}, {b!r}]")

    while b - a > 0.25 * tol:
        m = 0.5 * a + 0.5 * b
        if not a < m < b:
            break
        sm = _sign(evaluate(e, m))
        if sm == 0:
            a = b = m
            break
        if sm == sa:
            a = m
        else:
            b = m

    c = 0.5 * a + 0.5 * b
    half = 0.45 * tol
    lo, hi = max(search.lo, c - half), min(search.hi, c + half)
    if hi - lo <= tol and _certified_sign(e, lo) == sa and _certified_sign(e, hi) == -sa:
        return RootEnclosure(Interval(lo, hi), sa, -sa)
    if a < b:
        return RootEnclosure(Interval(a, b), sa, -sa)
    # exact zero at a and the centred enclosure was inconclusive: widen by ulps
    lo = hi = a
    while hi - lo <= tol:
        lo, hi = math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf)
        if _sign(evaluate(e, lo)) == sa and _sign(evaluate(e, hi)) == -sa:
            return RootEnclosure(Interval(lo, hi), sa, -sa)
    raise NoSignChangeError(f"cannot bracket the zero at {a!r} to width {tol!r}")


# certificates -----------------------------------------------------------------


@dataclass(frozen=True)
class Condition:
    name: str
    relation: SignRelation
    verdict: Verdict
    witness: float | None = None
    effort: int = 0

    def to_dict(self) -> dict:
        d = {"name": self.name, "relation": self.relation.value, "verdict": self.verdict.value}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass(frozen=True)
class Certificate:
    theorem: str
    side: Side
    interval: Interval
    root: RootEnclosure
    verdict: Verdict
    conditions: tuple[Condition, ...] = field(default_factory=tuple)
    effort: int = 0

    @property
    def blind_spot_width(self) -> float:
        return self.root.width

    @property
    def outer(self) -> float:
        return self.interval.lo if self.side is Side.LEFT else self.interval.hi

    @property
    def checked_interval(self) -> Interval:
        """The closed part of ``interval`` on which the conditions were verified."""
        if self.side is Side.LEFT:
            return Interval(self.interval.lo, self.root.lo)
        return Interval(self.root.hi, self.interval.hi)

    def condition(self, name: str) -> Condition:
        return next(c for c in self.conditions if c.name == name)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "side": self.side.value,
            "interval": self.interval.to_dict(),
            "root": self.root.to_dict(),
            "verdict": self.verdict.value,
            "conditions": [c.to_dict() for c in self.conditions],
            "effort": self.effort,
            "blind_spot_width": self.blind_spot_width,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _aggregate(conditions: list[Condition]) -> Verdict:
    verdicts = {c.verdict for c in conditions}
    if verdicts == {Verdict.CERTIFIED}:
        return Verdict.CERTIFIED
    if Verdict.REFUTED in verdicts:
        return Verdict.REFUTED
    return Verdict.UNKNOWN


def _geometry(side: Side, outer: float, root: RootEnclosure) -> tuple[Interval, Interval]:
    side = Side(side)
    if side is Side.LEFT:
        if not outer < root.lo:
            raise PreconditionError(f"left side needs outer < {root.lo!r}, got {outer!r}")
        return Interval(outer, root.lo), Interval(outer, root.hi)
    if not root.hi < outer:
        raise PreconditionError(f"right side needs outer > {root.hi!r}, got {outer!r}")
    return Interval(root.hi, outer), Interval(root.lo, outer)


def theorem_conditions(e: Expression, side: Side) -> list[tuple[str, Expression, SignRelation]]:
    """The (name, expression, relation) triples C1-C4 for one side of a root."""
    d1 = differentiate(e)
    d2 = differentiate(d1)
    return [
        ("C1", mul(e, d2), SignRelation.GE0),
        ("C2", mul(e, d1), SignRelation.LT0 if Side(side) is Side.LEFT else SignRelation.GT0),
        ("C3", d1, SignRelation.NE0),
        ("C4", e, SignRelation.NE0),
    ]


def lemma_conditions(e: Expression, side: Side) -> list[tuple[str, Expression, SignRelation]]:
    residual = fixed_point_residual(e)
    return [
        ("L1", add(differentiate(e), ONE), SignRelation.GE0),
        ("L2", residual, SignRelation.GT0 if Side(side) is Side.LEFT else SignRelation.LT0),
        ("L3", residual, SignRelation.NE0),
    ]


def _run(checks, J: Interval, budget: int) -> list[Condition]:
    out = []
    for name, expr, rel in checks:
        r = verify_sign(expr, J, rel, budget)
        out.append(Condition(name, rel, r.verdict, r.witness, r.effort))
    return out


def check_theorem(
    e: Expression,
    side: Side,
    outer: float,
    root: RootEnclosure,
    budget: int = DEFAULT_BUDGET,
) -> Certificate:
    """Certify (or refute) global Newton convergence toward ``root`` from ``outer``."""
    side = Side(side)
    J, full = _geometry(side, outer, root)
    conditions = _run(theorem_conditions(e, side), J, budget)
    return Certificate(
        theorem="Theorem1" if side is Side.LEFT else "Theorem2",
        side=side,
        interval=full,
        root=root,
        verdict=_aggregate(conditions),
        conditions=tuple(conditions),
        effort=sum(c.effort for c in conditions),
    )


def check_lemma_conditions(
    e: Expression,
    side: Side,
    outer: float,
    fixed_point: RootEnclosure,
    budget: int = DEFAULT_BUDGET,
) -> Certificate:
    """Check the mean-iterate convergence conditions for the map ``e``.

    ``fixed_point`` should come from ``isolate_root(fixed_point_residual(e), ...)``.
    """
    side = Side(side)
    J, full = _geometry(side, outer, fixed_point)
    conditions = _run(lemma_conditions(e, side), J, budget)
    return Certificate(
        theorem="Lemma1" if side is Side.LEFT else "Lemma2",
        side=side,
        interval=full,
        root=fixed_point,
        verdict=_aggregate(conditions),
        conditions=tuple(conditions),
        effort=sum(c.effort for c in conditions),
    )


def fixed_point_residual(e: Expression) -> Expression:
    """``e(x) - x`` as an expression."""
    return sub(e, X)
