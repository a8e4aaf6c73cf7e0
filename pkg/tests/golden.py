"""Reference values shared by the solver, CLI and acceptance tests."""

# Newton on x^3 - 2x + 2 from x0 = -400, as published (x0 .. x19)
CUBIC_TRACE = [
    -400.0,
    -266.6677819490915,
    -177.78019734972494,
    -118.52265267881265,
    -79.01889929291954,
    -52.68499811014733,
    -35.13201021893894,
    -23.43453810797174,
    -15.643229227593249,
    -10.46004014373921,
    -7.022240831542441,
    -4.759356916742918,
    -3.299443626313881,
    -2.4083528310926825,
    -1.9439433123997434,
    -1.7877742400378036,
    -1.7695329436681617,
    -1.7692923957961018,
    -1.7692923542386327,
    -1.7692923542386314,
]
CUBIC_ROOT = -1.7692923542386314

CUBIC_TEXT = "x^3-2*x+2"
PIECEWISE_TEXT = "if(x<=0, x^2+x, x^2-x)"
G_TEXT = "x^2+x"


def bisect(f, a, b, tol):
    """Plain bisection on a sign change; the oracle for fixed points and roots."""
    fa = f(a)
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)
