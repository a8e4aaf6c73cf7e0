"""Newton from far away on x^3 - 2x + 2, printed as a CSV table.

    python scripts/example2_trace.py [--x0 -400] [--out trace.csv]
"""

import argparse
import sys

from newtoncert import newton_solve, parse


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x0", type=float, default=-400.0)
    ap.add_argument("--out", help="write CSV here instead of stdout")
    args = ap.parse_args(argv)

    trace = newton_solve(parse("x^3-2*x+2"), args.x0)
    text = trace.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"# {trace.termination.kind.value} after {trace.iterations} steps, final {trace.final!r}", file=sys.stderr)


if __name__ == "__main__":
    main()
