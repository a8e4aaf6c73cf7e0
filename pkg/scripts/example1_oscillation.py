"""Same start, two functions that agree on [-1/2, 0]: one cycles, one converges.

f is x^2+x for x <= 0 and x^2-x beyond; g is x^2+x everywhere.
"""

from newtoncert import newton_solve, parse

X0 = -1.0 / 3.0


def show(name, text):
    trace = newton_solve(parse(text), X0)
    t = trace.termination
    print(f"{name}: {text}")
    for n, x in enumerate(trace.iterates):
        print(f"  x{n:<2d} = {x:.17g}")
    extra = f" period {t.period} at {t.cycle_points}" if t.period else ""
    print(f"  -> {t.kind.value}{extra}\n")


if __name__ == "__main__":
    show("f", "if(x<=0, x^2+x, x^2-x)")
    show("g", "x^2+x")
