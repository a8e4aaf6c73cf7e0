"""Scan left endpoints a and report which ones certify Newton on [a, c].

    python scripts/certify_scan.py --expr "x^3-2*x+2" --bracket -5,0 --steps 21
"""

import argparse

from newtoncert import Interval, Side, check_theorem, isolate_root, parse


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--expr", default="x^3-2*x+2")
    ap.add_argument("--bracket", default="-5,0")
    ap.add_argument("--steps", type=int, default=21)
    ap.add_argument("--budget", type=int, default=4096)
    args = ap.parse_args(argv)

    e = parse(args.expr)
    lo, hi = (float(v) for v in args.bracket.split(","))
    root = isolate_root(e, Interval(lo, hi))
    print(f"root in [{root.lo!r}, {root.hi!r}]")
    print("side,outer,verdict,failed,effort")
    for side, far in ((Side.LEFT, lo), (Side.RIGHT, hi)):
        near = root.lo if side is Side.LEFT else root.hi
        for k in range(args.steps):
            outer = far + (near - far) * k / args.steps
            cert = check_theorem(e, side, outer, root, args.budget)
            failed = "|".join(c.name for c in cert.conditions if c.verdict.value != "Certified")
            print(f"{side.value},{outer:.6g},{cert.verdict.value},{failed},{cert.effort}")


if __name__ == "__main__":
    main()
