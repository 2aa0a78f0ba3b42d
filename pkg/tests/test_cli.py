import csv
import io
import json
import subprocess
import sys

import pytest

from leibniz import lcf
from leibniz.cli import CONFIG_ENV, run


def call(*argv, environ=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err, environ=environ or {})
    return code, out.getvalue().strip(), err.getvalue().strip()


def test_documented_examples():
    assert call("deriv", "x^2", "--at", "3") == (0, "6", "")
    assert call("st", "3 + 5*eps + eps^2")[1] == "3"
    assert call("transitus", "--builtin", "ellipse-family")[1] == "x^2 = 4*y"


@pytest.mark.parametrize("argv,expected", [
    (("eval", "x^2", "--at", "3 + eps"), "9 + 6*eps + eps^2"),
    (("classify", "eps^-1 + 2"), "Infinite"),
    (("relate", "inc", "eps", "1"), "true"),
    (("relate", "comparable", "2", "3"), "true (witness 2)"),
    (("relate", "approx", "3 + eps", "3"), "true"),
    (("purge", "11*eps + 2*eps^2"), "11*eps"),
    (("purge", "1 + eps + eps^3", "--order", "1"), "1 + eps"),
    (("deriv", "exp(x)", "--at", "0", "--order", "5"), "1"),
    (("quotient", "x^2", "--at", "3"), "6 + eps"),
    (("ddpair", "x^2", "--at", "3", "--dx", "1/2"), "(d)x = 1/2, (d)y = 3, L = 6"),
    (("tangent", "x^2", "--at", "1"), "y = 2x - 1"),
    (("curvature", "x", "x^2", "--at", "0"), "center (0,1/2), r^2 = 1/4, curvature 2"),
    (("integrate", "6*x^5", "--from", "0", "--to", "2"), "64"),
    (("sum-powers", "2"), "n^3/3 + n^2/2 + n/6"),
    (("microstraight", "x", "x^2", "--at", "1"), "5 + 4*eps + eps^2  (st = 5)"),
    (("jet", "x^2+3*x", "--at", "0"), "Jet2(0, 3)"),
    (("archimedes", "x^2", "--at", "3", "--limit", "6", "--tol", "1/100"), "witness 101"),
])
def test_commands(argv, expected):
    code, out, err = call(*argv)
    assert (code, err) == (0, "")
    assert out == expected


def test_mu_demo_and_transfer():
    code, out, _ = call("mu-demo")
    assert code == 0 and "st(1/mu): 0" in out
    code, out, _ = call("transfer", "forall^st x. forall^st y. x + y = y + x")
    assert "rewritten: forall x. forall y. x + y = y + x" in out
    code, out, _ = call("transfer", "forall x. x < 1000", "--test")
    assert "counterexample: x = eps^-1" in out
    code, out, _ = call("transfer", "forall^st x. x < H", "--param", "H=nonst")
    assert "applicable: false" in out
    code, out, _ = call("transfer", "forall x. x + h > x", "--param", "h=nonst:eps", "--test")
    assert code == 0 and "consistent with transfer" in out


def test_exit_codes():
    code, _, err = call("deriv", "x^(1/3)", "--at", "0")
    assert code == 3 and err.startswith("InfinitePart")
    assert call("deriv", "x^2")[0] == 2
    assert call("nosuchcommand")[0] == 2
    assert call("deriv", "x^2", "--at", "one")[0] == 2
    code, _, err = call("transfer", "forall x x")
    assert code == 3 and err.startswith("FormulaSyntaxError")
    code, _, err = call("transfer", "forall x. x < H")
    assert code == 3 and err.startswith("UnboundVariable")
    assert call("transfer", "forall x. x < H", "--param", "H=maybe")[0] == 2


def test_json_output_roundtrips():
    code, out, _ = call("--output", "json", "eval", "x^2", "--at", "3 + eps")
    assert lcf.from_json(json.loads(out)) == lcf.parse_number("9 + 6*eps + eps^2")
    code, out, _ = call("relate", "inc", "1", "eps", "--output", "json")
    assert json.loads(out) == {"holds": False, "witness": 1,
                               "rationale": json.loads(out)["rationale"]}
    code, out, _ = call("--output", "json", "transitus")
    data = json.loads(out)
    assert data["equation"] == "x^2 = 4*y" and data["coefficients"]["E"] == "-4"
    code, out, _ = call("--output", "json", "transfer", "forall^st x. x = x")
    assert json.loads(out)["rewritten"] == "forall x. x = x"


def test_numeric_mode_and_precision():
    code, out, _ = call("--mode", "numeric", "--precision", "30", "deriv", "exp(x)", "--at", "1")
    assert code == 0 and out.startswith("2.71828182845904523536028747")
    assert len(out.replace(".", "")) <= 30
    code, out, _ = call("--mode", "numeric", "tangent", "x^2", "--at", "1")
    assert code == 0 and "*x" in out


def test_config_file_and_env(tmp_path):
    cfg = tmp_path / "leibniz.conf"
    cfg.write_text("# defaults\nmode = numeric\nprecision = 20\n")
    code, out, _ = call("deriv", "exp(x)", "--at", "1", environ={CONFIG_ENV: str(cfg)})
    assert code == 0 and out.startswith("2.718281828")
    # command line beats the file
    code, _, err = call("--mode", "exact", "deriv", "exp(x)", "--at", "1",
                        environ={CONFIG_ENV: str(cfg)})
    assert code == 3 and "NumericModeRequired" in err
    code, out, _ = call("--config", str(cfg), "--window", "4", "eval", "exp(x)", "--at", "eps")
    assert "O(eps^4)" in out
    bad = tmp_path / "bad.conf"
    bad.write_text("colour = blue\n")
    assert call("--config", str(bad), "st", "1")[0] == 2


def test_plot_outputs(tmp_path):
    p = tmp_path / "fig.svg"
    assert call("plot", "secant_vs_tangent", "x^2", "--at", "1", "--out", str(p))[0] == 0
    svg = p.read_text()
    assert 'width="800"' in svg and 'height="600"' in svg and "y = 2x - 1" in svg
    assert '<line class="tangent"' in svg
    c = tmp_path / "poly.csv"
    assert call("plot", "polygon_approx", "x^2", "--sides", "2", "--out", str(c))[0] == 0
    rows = list(csv.reader(c.open()))
    assert rows[0] == ["x", "f(x)", "approx(x)"] and len(rows) == 4
    code, _, err = call("plot", "polygon_approx", "x^2", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 3 and err.startswith("IoError")
    code, _, err = call("plot", "polygon_approx", "x^2", "--sides", "1", "--out", str(c))
    assert code == 3 and err.startswith("DomainError")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "leibniz", "st", "3 + 5*eps + eps^2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "3"


def test_selfcheck_quick():
    code, out, _ = call("selfcheck", "--quick")
    assert code == 0 and out.count("[PASS]") == 11
