"""Command-line front end.

Exit codes: 0 success (Converged / Certified), 2 Refuted or a non-convergent
termination, 3 Unknown verdict, 4 usage error, 5 domain or evaluation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import TextIO

from .certify import (
    DEFAULT_BUDGET,
    DEFAULT_ROOT_TOL,
    Certificate,
    RootEnclosure,
    Side,
    Verdict,
    check_lemma_conditions,
    check_theorem,
    fixed_point_residual,
    isolate_root,
)
from .errors import DomainError, NoSignChangeError, ParseError, PreconditionError
from .expr import eval_interval, eval_jet2, format_expr, nth_derivative, parse
from .interval import Interval
from .solve import (
    IterationTrace,
    SolverConfig,
    TerminationKind,
    certified_solve,
    mean_iterate_solve,
    newton_solve,
)

EXIT_OK = 0
EXIT_FAILED = 2
EXIT_UNKNOWN = 3
EXIT_USAGE = 4
EXIT_DOMAIN = 5

# flags whose values may start with '-' (argparse would read "-5,0" as a flag)
_VALUE_FLAGS = ("--bracket", "--domain", "--interval", "--x0", "--x", "--outer")

_DEFAULTS = SolverConfig()


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _pair(text: str) -> Interval:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected a,b but got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two numbers in {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"need a < b in {text!r}")
    return Interval(lo, hi)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="newtoncert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--expr", required=True, help='function of x, e.g. "x^3-2*x+2"')
        p.add_argument("--out", choices=("table", "json", "csv"), default="table")
        return p

    def solver_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--max-iter", type=_positive_int, default=_DEFAULTS.max_iter)
        p.add_argument("--xtol", type=_positive_float, default=_DEFAULTS.xtol)
        p.add_argument("--ftol", type=_positive_float, default=_DEFAULTS.ftol)
        p.add_argument("--cycle-window", type=int, default=_DEFAULTS.cycle_window)
        p.add_argument("--cycle-tol", type=_positive_float, default=_DEFAULTS.cycle_tol)

    def cert_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--bracket", type=_pair, required=True, help="a,b with a sign change")
        p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
        p.add_argument("--root-tol", type=_positive_float, default=DEFAULT_ROOT_TOL)

    p = command("diff", "symbolic derivative")
    p.add_argument("--order", type=int, default=1)

    p = command("eval", "value and derivatives at a point, or an interval enclosure")
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--x", type=float)
    where.add_argument("--interval", type=_pair)

    p = command("isolate", "bracket a root by bisection")
    p.add_argument("--bracket", type=_pair, required=True)
    p.add_argument("--root-tol", type=_positive_float, default=DEFAULT_ROOT_TOL)

    p = command("certify", "check the convergence hypotheses on one side of a root")
    cert_flags(p)
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument(
        "--lemma",
        action="store_true",
        help="check the mean-iterate conditions for the fixed point of the map instead",
    )

    p = command("solve", "run Newton or the mean iterate from --x0")
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--method", choices=("newton", "mean"), default="newton")
    p.add_argument("--domain", type=_pair)
    solver_flags(p)

    p = command("certified-solve", "certify a side of the bracket, then run Newton from its far end")
    cert_flags(p)
    solver_flags(p)
    p.add_argument("--advisory", action="store_true", help="iterate even without a certificate")
    return parser


def _join_values(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


# rendering ----------------------------------------------------------------------


def _g(v) -> str:
    return "nan" if v is None else f"{v:.17g}"


def emit_trace(trace: IterationTrace, fmt: str) -> str:
    """Render a trace as ``table``, ``json`` or ``csv``; output is deterministic."""
    if fmt == "json":
        return json.dumps(trace.to_dict()) + "\n"
    if fmt == "csv":
        return trace.to_csv()
    rows = [(str(n), _g(x), _g(r)) for n, (x, r) in enumerate(zip(trace.iterates, trace.residuals))]
    header = ("n", "x", "f" if trace.method.value == "Newton" else "f(x)-x")
    widths = [max(len(r[i]) for r in rows + [header]) for i in range(3)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in [header, *rows]]
    term = trace.termination
    status = term.kind.value
    if term.kind is TerminationKind.CYCLE_DETECTED:
        pts = ", ".join(_g(p) for p in term.cycle_points)
        status += f" (period {term.period}: {pts})"
    elif term.message:
        status += f" ({term.message})"
    lines.append(f"termination: {status} after {trace.iterations} iterations")
    if trace.advisory:
        lines.append("advisory: convergence is NOT guaranteed")
    return "\n".join(lines) + "\n"


def emit_certificate(cert: Certificate, fmt: str) -> str:
    if fmt == "json":
        return cert.to_json() + "\n"
    if fmt == "csv":
        lines = ["name,relation,verdict,witness"]
        for c in cert.conditions:
            w = "" if c.witness is None else _g(c.witness)
            lines.append(f"{c.name},{c.relation.value},{c.verdict.value},{w}")
        return "\n".join(lines) + "\n"
    lines = [
        f"theorem    {cert.theorem} ({cert.side.value})",
        f"interval   [{_g(cert.interval.lo)}, {_g(cert.interval.hi)}]",
        f"root       [{_g(cert.root.lo)}, {_g(cert.root.hi)}]",
        f"blind spot {_g(cert.blind_spot_width)}",
        f"verdict    {cert.verdict.value}",
    ]
    for c in cert.conditions:
        extra = "" if c.witness is None else f"  witness x = {_g(c.witness)}"
        lines.append(f"  {c.name}  {c.relation.value}  {c.verdict.value}{extra}")
    lines.append(f"effort     {cert.effort}")
    return "\n".join(lines) + "\n"


def _verdict_code(v: Verdict) -> int:
    return {Verdict.CERTIFIED: EXIT_OK, Verdict.REFUTED: EXIT_FAILED, Verdict.UNKNOWN: EXIT_UNKNOWN}[v]


def _trace_code(trace: IterationTrace) -> int:
    if trace.converged:
        return EXIT_OK
    if trace.termination.kind is TerminationKind.DOMAIN_ERROR:
        return EXIT_DOMAIN
    return EXIT_FAILED


def _config(args, advisory: bool = False) -> SolverConfig:
    return SolverConfig(
        max_iter=args.max_iter,
        xtol=args.xtol,
        ftol=args.ftol,
        cycle_window=args.cycle_window,
        cycle_tol=args.cycle_tol,
        advisory=advisory,
    )


# subcommands --------------------------------------------------------------------


def _cmd_diff(args, e) -> tuple[str, int]:
    if args.order < 0:
        raise UsageError("--order must be >= 0")
    d = format_expr(nth_derivative(e, args.order))
    if args.out == "json":
        return json.dumps({"expr": format_expr(e), "order": args.order, "derivative": d}) + "\n", 0
    if args.out == "csv":
        return f"order,derivative\n{args.order},{d}\n", 0
    return d + "\n", 0


def _cmd_eval(args, e) -> tuple[str, int]:
    if args.interval is not None:
        enc = eval_interval(e, args.interval)
        if args.out == "json":
            return json.dumps({"interval": args.interval.to_dict(), "enclosure": enc.to_dict()}) + "\n", 0
        if args.out == "csv":
            return f"lo,hi\n{_g(enc.lo)},{_g(enc.hi)}\n", 0
        return f"[{_g(enc.lo)}, {_g(enc.hi)}]\n", 0
    j = eval_jet2(e, args.x)
    if args.out == "json":
        return json.dumps({"x": args.x, "value": j.value, "d1": j.d1, "d2": j.d2}) + "\n", 0
    if args.out == "csv":
        return f"x,value,d1,d2\n{_g(args.x)},{_g(j.value)},{_g(j.d1)},{_g(j.d2)}\n", 0
    return f"f(x)   {_g(j.value)}\nf'(x)  {_g(j.d1)}\nf''(x) {_g(j.d2)}\n", 0


def _enclosure_text(r: RootEnclosure, fmt: str) -> str:
    d = {**r.to_dict(), "sign_left": r.sign_left, "sign_right": r.sign_right, "width": r.width}
    if fmt == "json":
        return json.dumps(d) + "\n"
    if fmt == "csv":
        return "lo,hi,sign_left,sign_right,width\n" + ",".join(
            _g(v) if isinstance(v, float) else str(v) for v in d.values()
        ) + "\n"
    return f"root in [{_g(r.lo)}, {_g(r.hi)}]  width {_g(r.width)}\n"


def _cmd_isolate(args, e) -> tuple[str, int]:
    return _enclosure_text(isolate_root(e, args.bracket, args.root_tol), args.out), 0


def _cmd_certify(args, e) -> tuple[str, int]:
    side = Side.LEFT if args.side == "left" else Side.RIGHT
    outer = args.bracket.lo if side is Side.LEFT else args.bracket.hi
    if args.lemma:
        fp = isolate_root(fixed_point_residual(e), args.bracket, args.root_tol)
        cert = check_lemma_conditions(e, side, outer, fp, args.budget)
    else:
        root = isolate_root(e, args.bracket, args.root_tol)
        cert = check_theorem(e, side, outer, root, args.budget)
    return emit_certificate(cert, args.out), _verdict_code(cert.verdict)


def _cmd_solve(args, e) -> tuple[str, int]:
    solver = newton_solve if args.method == "newton" else mean_iterate_solve
    trace = solver(e, args.x0, _config(args), args.domain)
    return emit_trace(trace, args.out), _trace_code(trace)


def _cmd_certified_solve(args, e) -> tuple[str, int]:
    cert, trace = certified_solve(
        e, args.bracket, _config(args, args.advisory), args.budget, args.root_tol
    )
    if cert.verdict is Verdict.CERTIFIED:
        code = _trace_code(trace)
    else:
        code = _verdict_code(cert.verdict)
    if args.out == "json":
        doc = {"certificate": cert.to_dict(), "trace": trace.to_dict()}
        if trace.advisory:
            doc["advisory"] = True
        return json.dumps(doc) + "\n", code
    if args.out == "csv":
        return emit_trace(trace, "csv"), code
    return emit_certificate(cert, "table") + "\n" + emit_trace(trace, "table"), code


_COMMANDS = {
    "diff": _cmd_diff,
    "eval": _cmd_eval,
    "isolate": _cmd_isolate,
    "certify": _cmd_certify,
    "solve": _cmd_solve,
    "certified-solve": _cmd_certified_solve,
}


def run(argv: list[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """Execute one invocation; returns the process exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(_join_values(list(argv)))
        e = parse(args.expr)
        text, code = _COMMANDS[args.command](args, e)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except (ParseError, PreconditionError, ValueError) as exc:
        if isinstance(exc, NoSignChangeError):
            print(f"error: {exc}", file=stderr)
            return EXIT_DOMAIN
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=stderr)
        return EXIT_DOMAIN
    stdout.write(text)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
