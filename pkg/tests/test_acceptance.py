"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import io
import json
import math
import random
import time

from exprgen import random_any, random_smooth
from golden import CUBIC_ROOT, CUBIC_TEXT, CUBIC_TRACE, G_TEXT, PIECEWISE_TEXT, bisect
from newtoncert.certify import Side, Verdict, check_theorem, isolate_root
from newtoncert.cli import run
from newtoncert.errors import DomainError
from newtoncert.expr import differentiate, eval_interval, eval_jet2, evaluate, parse
from newtoncert.interval import Interval
from newtoncert.solve import (
    SolverConfig,
    TerminationKind,
    damped_transform,
    mean_iterate_solve,
    newton_solve,
    newton_step,
)

CUBIC = parse(CUBIC_TEXT)
G = parse(G_TEXT)
THIRD = 1.0 / 3.0


def _cli_json(*argv):
    out = io.StringIO()
    code = run(list(argv), out, io.StringIO())
    return code, json.loads(out.getvalue())


def _certificates():
    cubic_root = isolate_root(CUBIC, Interval(-5.0, 0.0))
    g_root = isolate_root(G, Interval(-0.25, 0.5))
    return [
        (CUBIC, check_theorem(CUBIC, Side.LEFT, -5.0, cubic_root, 4096)),
        (G, check_theorem(G, Side.RIGHT, 0.5, g_root, 4096)),
    ]


def test_criterion_1_golden_trace(report):
    argv = ["solve", "--expr", CUBIC_TEXT, "--x0", "-400", "--out", "json"]
    code, doc = _cli_json(*argv)
    xs = doc["iterates"]
    worst = max(abs(a - b) / abs(b) for a, b in zip(xs, CUBIC_TRACE))
    elapsed = math.inf
    for _ in range(5):
        t0 = time.perf_counter()
        run(argv, io.StringIO(), io.StringIO())
        elapsed = min(elapsed, time.perf_counter() - t0)
    ok = (
        code == 0
        and len(xs) >= len(CUBIC_TRACE)
        and worst <= 1e-9
        and abs(doc["final"] - CUBIC_ROOT) <= 1e-12
        and elapsed < 0.010
    )
    report(
        1,
        "golden trace from x0=-400",
        ok,
        f"{len(CUBIC_TRACE)} values, worst rel err {worst:.1e}, final {doc['final']!r}, {elapsed * 1e3:.2f} ms",
    )


def test_criterion_2_oscillation(report):
    trace = newton_solve(parse(PIECEWISE_TEXT), -THIRD)
    t = trace.termination
    points = sorted(t.cycle_points or ())
    ok = (
        t.kind is TerminationKind.CYCLE_DETECTED
        and t.period == 2
        and trace.iterations <= 12
        and len(points) == 2
        and abs(points[0] + THIRD) <= 1e-12
        and abs(points[1] - THIRD) <= 1e-12
    )
    report(2, "piecewise oscillation detected", ok, f"{t.kind.value} period {t.period} after {trace.iterations} iterations")


def test_criterion_3_post_oscillation(report):
    trace = newton_solve(G, -THIRD)
    y1 = trace.iterates[1]
    ok = abs(y1 - THIRD) <= 1e-15 and trace.converged and abs(trace.final) <= 1e-12 and trace.iterations <= 30
    report(3, "x^2+x from -1/3 converges", ok, f"y1={y1!r}, final={trace.final!r}, {trace.iterations} iterations")


def test_criterion_4_certified_cases(report):
    certs = _certificates()
    ok = all(
        c.verdict is Verdict.CERTIFIED
        and [k.name for k in c.conditions] == ["C1", "C2", "C3", "C4"]
        and all(k.verdict is Verdict.CERTIFIED for k in c.conditions)
        for _, c in certs
    )
    detail = "; ".join(f"{c.theorem} on [{c.interval.lo:g}, {c.interval.hi:.6g}] effort {c.effort}" for _, c in certs)
    report(4, "cubic Left and x^2+x Right certified", ok, detail)


def test_criterion_5_refuted_case(report):
    root = isolate_root(G, Interval(-0.5, 0.25))
    cert = check_theorem(G, Side.LEFT, -0.5, root, 4096)
    c1 = cert.condition("C1")
    w = c1.witness
    # f*f'' evaluated directly, outside the certifier
    direct = (w * w + w) * 2.0 if w is not None else math.nan
    ok = cert.verdict is Verdict.REFUTED and c1.verdict is Verdict.REFUTED and -0.5 < w < 0 and direct < 0
    report(5, "x^2+x Left refuted on C1", ok, f"witness {w!r}, f*f''={direct:.3g}")


def test_criterion_6_certified_monotone_convergence(report):
    rng = random.Random(20261018)
    cfg = SolverConfig()
    failures = []
    runs = 0
    for e, cert in _certificates():
        J = cert.checked_interval
        for _ in range(100):
            x0 = rng.uniform(J.lo, J.hi)
            trace = newton_solve(e, x0, cfg, cert.interval)
            runs += 1
            xs = trace.iterates
            slack = 4 * math.ulp(max(1.0, abs(trace.final)))
            if cert.side is Side.LEFT:
                monotone = all(b >= a - slack for a, b in zip(xs, xs[1:]))
            else:
                monotone = all(b <= a + slack for a, b in zip(xs, xs[1:]))
            inside = all(x in cert.interval for x in xs)
            good = trace.converged and abs(evaluate(e, trace.final)) <= 1e-12
            if not (monotone and inside and good):
                failures.append((x0, trace.termination.kind.value))
    report(6, "monotone convergence from random certified starts", not failures, f"{runs} runs, {len(failures)} failures {failures[:3]}")


def test_criterion_7_transform_identity(report):
    rng = random.Random(7)
    pairs, worst = 0, 0.0
    while pairs < 1000:
        e = random_smooth(rng, 3)
        x = rng.uniform(-3.0, 3.0)
        try:
            if abs(eval_jet2(e, x).d1) <= 1e-6:
                continue
            step = newton_step(e, x)
            F = damped_transform(e, x)
        except DomainError:
            continue
        pairs += 1
        worst = max(worst, abs(0.5 * (x + F) - step) / math.ulp(step))
    report(7, "(x+F(x))/2 equals the Newton step", worst <= 4.0, f"{pairs} pairs, worst {worst:g} ulp")


def test_criterion_8_mean_iterate(report):
    oracle = bisect(lambda x: math.cos(x) - x, 0.0, 1.0, 1e-14)
    trace = mean_iterate_solve(parse("cos(x)"), 0.0)
    xs = trace.iterates
    monotone = all(a <= b for a, b in zip(xs, xs[1:]))
    err = abs(trace.final - oracle)
    ok = trace.converged and err <= 1e-12 and monotone
    report(8, "mean iterate of cos from 0", ok, f"final {trace.final!r}, oracle {oracle!r}, err {err:.1e}")


def test_criterion_9_numerics(report):
    rng = random.Random(9)
    pairs, worst = 0, 0.0
    while pairs < 500:
        e = random_smooth(rng, 3)
        x = rng.uniform(-2.0, 2.0)
        h = 1e-5 * max(1.0, abs(x))
        try:
            sym = evaluate(differentiate(e), x)
            jet = eval_jet2(e, x).d1
            fd = (evaluate(e, x + h) - evaluate(e, x - h)) / (2 * h)
        except DomainError:
            continue
        pairs += 1
        scale = max(1.0, abs(sym))
        worst = max(worst, abs(sym - jet) / scale, abs(sym - fd) / scale, abs(jet - fd) / scale)

    samples = violations = 0
    while samples < 10_000:
        e = random_any(rng, 3)
        a, b = sorted((rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)))
        I = Interval(a, b)
        try:
            enc = eval_interval(e, I)
        except DomainError:
            continue
        for _ in range(10):
            x = rng.uniform(a, b)
            try:
                v = evaluate(e, x)
            except DomainError:
                continue
            samples += 1
            violations += v not in enc
    ok = worst <= 1e-6 and violations == 0
    report(9, "derivative agreement and interval soundness", ok, f"{pairs} pairs worst rel {worst:.1e}; {samples} samples, {violations} violations")
