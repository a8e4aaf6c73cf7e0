import io
import json
import pathlib
import subprocess
import sys

import jsonschema
import pytest
from referencing import Registry, Resource

from golden import CUBIC_ROOT, CUBIC_TEXT, CUBIC_TRACE, PIECEWISE_TEXT
from newtoncert.cli import emit_trace, run
from newtoncert.expr import parse
from newtoncert.solve import newton_solve, refused_trace

SCHEMAS = pathlib.Path(__file__).resolve().parents[1] / "docs" / "schemas"


def _schema(name):
    return json.loads((SCHEMAS / name).read_text())


REGISTRY = Registry().with_resources(
    (p.name, Resource.from_contents(json.loads(p.read_text()))) for p in SCHEMAS.glob("*.json")
)


def validate(doc, name):
    jsonschema.Draft202012Validator(_schema(name), registry=REGISTRY).validate(doc)


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


# examples --------------------------------------------------------------------


def test_certified_solve_json():
    code, out, _ = cli("certified-solve", "--expr", CUBIC_TEXT, "--bracket", "-5,0", "--out", "json")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "certified_solve.schema.json")
    assert doc["certificate"]["verdict"] == "Certified"
    assert doc["trace"]["final"] == pytest.approx(CUBIC_ROOT, abs=1e-15)
    assert doc["trace"]["x0"] == -5.0


def test_solve_piecewise_cycles():
    code, out, _ = cli("solve", "--expr", PIECEWISE_TEXT, "--x0", "-0.333333333333333333", "--out", "json")
    assert code == 2
    doc = json.loads(out)
    validate(doc, "trace.schema.json")
    assert doc["termination"]["kind"] == "CycleDetected"
    assert doc["termination"]["detail"]["period"] == 2


def test_diff():
    assert cli("diff", "--expr", CUBIC_TEXT, "--order", "1") == (0, "3*x^2-2\n", "")
    assert cli("diff", "--expr", CUBIC_TEXT, "--order", "2")[1] == "6*x\n"


def test_golden_csv():
    code, out, _ = cli("solve", "--expr", CUBIC_TEXT, "--x0", "-400", "--out", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,x,f"
    assert len(lines) == 1 + len(CUBIC_TRACE)
    assert lines[1].startswith("0,-400,")
    assert lines[-1].startswith("19,-1.7692923542386314,")
    assert [float(l.split(",")[1]) for l in lines[1:]] == CUBIC_TRACE


def test_emit_refusal_shape():
    doc = json.loads(emit_trace(refused_trace(parse("sin(x)"), -1.0), "json"))
    validate(doc, "trace.schema.json")
    assert doc["termination"]["kind"] == "Refused"
    assert doc["iterates"] == [-1.0]


def test_emit_single_row_table():
    text = emit_trace(newton_solve(parse("x-2"), 2.0), "table")
    lines = text.splitlines()
    assert lines[0].split() == ["n", "x", "f"]
    assert lines[1].split() == ["0", "2", "0"]
    assert lines[2].startswith("termination: Converged")
    assert len(lines) == 3


# exit codes ------------------------------------------------------------------


def test_certify_outcomes():
    code, out, _ = cli("certify", "--expr", "x^2+x", "--bracket", "-0.5,0.5", "--side", "left", "--out", "json")
    assert code == 2
    doc = json.loads(out)
    validate(doc, "certificate.schema.json")
    c1 = next(c for c in doc["conditions"] if c["name"] == "C1")
    assert c1["verdict"] == "Refuted" and -0.5 < c1["witness"] < 0
    code, out, _ = cli("certify", "--expr", "x^2+x", "--bracket", "-0.5,0.5", "--side", "right", "--out", "json")
    assert code == 0 and json.loads(out)["theorem"] == "Theorem2"


def test_certify_unknown_exit_code():
    argv = ["certify", "--expr", "x+x^3*cos(x)/10", "--bracket", "-0.5,3"]
    assert cli(*argv, "--budget", "1")[0] == 3
    assert cli(*argv, "--budget", "2")[0] == 0


def test_lemma_mode():
    code, out, _ = cli("certify", "--expr", "cos(x)", "--bracket", "0,1", "--lemma", "--out", "json")
    doc = json.loads(out)
    validate(doc, "certificate.schema.json")
    assert code == 0 and doc["theorem"] == "Lemma1"


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--expr", "x+"],
        ["solve", "--expr", "x*y", "--x0", "1"],
        ["solve", "--expr", "x"],
        ["solve", "--expr", "x", "--x0", "1", "--max-iter", "0"],
        ["certify", "--expr", "x", "--bracket", "1"],
        ["certify", "--expr", "x", "--bracket", "1,-1"],
        ["frobnicate", "--expr", "x"],
        ["solve", "--expr", "x", "--x0", "5", "--domain", "-1,1"],
        [],
    ],
)
def test_usage_errors_exit_4_without_output(argv):
    code, out, err = cli(*argv)
    assert code == 4
    assert out == ""
    assert err


def test_domain_errors_exit_5():
    assert cli("eval", "--expr", "log(x)", "--x", "-1")[0] == 5
    assert cli("isolate", "--expr", "x^2+1", "--bracket", "-1,1")[0] == 5
    assert cli("solve", "--expr", "log(x)", "--x0", "3")[0] == 5


def test_non_convergent_exit_2():
    assert cli("solve", "--expr", CUBIC_TEXT, "--x0", "-400", "--max-iter", "3")[0] == 2
    assert cli("solve", "--expr", "x^2+1", "--x0", "0")[0] == 2


def test_refused_and_advisory():
    code, out, _ = cli("certified-solve", "--expr", "sin(x)", "--bracket", "-1,2", "--out", "json")
    doc = json.loads(out)
    validate(doc, "certified_solve.schema.json")
    assert code == 2 and doc["trace"]["termination"]["kind"] == "Refused"
    assert "advisory" not in doc
    code, out, _ = cli("certified-solve", "--expr", "sin(x)", "--bracket", "-1,2", "--advisory", "--out", "json")
    doc = json.loads(out)
    validate(doc, "certified_solve.schema.json")
    assert doc["advisory"] is True and doc["trace"]["advisory"] is True
    code, out, _ = cli("certified-solve", "--expr", "sin(x)", "--bracket", "-1,2", "--advisory")
    assert "NOT guaranteed" in out


def test_mean_method():
    code, out, _ = cli("solve", "--expr", "cos(x)", "--x0", "0", "--method", "mean", "--out", "json")
    doc = json.loads(out)
    validate(doc, "trace.schema.json")
    assert code == 0 and doc["method"] == "MeanIterate"


def test_eval_and_isolate_outputs():
    code, out, _ = cli("eval", "--expr", CUBIC_TEXT, "--x", "1", "--out", "json")
    assert code == 0 and json.loads(out) == {"x": 1.0, "value": 1.0, "d1": 1.0, "d2": 6.0}
    code, out, _ = cli("eval", "--expr", CUBIC_TEXT, "--interval", "-5,-2", "--out", "json")
    enc = json.loads(out)["enclosure"]
    assert enc["lo"] <= -113 and enc["hi"] >= -2
    code, out, _ = cli("isolate", "--expr", CUBIC_TEXT, "--bracket", "-5,0", "--out", "json")
    r = json.loads(out)
    assert r["lo"] <= CUBIC_ROOT <= r["hi"] and r["width"] <= 1e-12


# determinism -----------------------------------------------------------------


@pytest.mark.parametrize("fmt", ["table", "json", "csv"])
def test_output_is_deterministic(fmt):
    argv = ["certified-solve", "--expr", CUBIC_TEXT, "--bracket", "-5,0", "--out", fmt]
    assert cli(*argv) == cli(*argv)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "newtoncert", "diff", "--expr", CUBIC_TEXT],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "3*x^2-2\n"
