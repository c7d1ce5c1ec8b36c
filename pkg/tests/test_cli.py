import csv
import importlib
import io
import json
import subprocess
import sys

import pytest

from okamoto import cli


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def result(*argv):
    code, out, err = call(*argv, "--no-timing")
    assert code == 0, err
    return json.loads(out)["result"]


def test_classify_example():
    assert result("classify", "--a", "11/20", "--x", "3/4")["tag"] == "PlusInfinity"


def test_critical_example():
    r = result("critical", "--x", "0.0220(2000202)")
    assert abs(r["a_star"] - 0.5261) < 5e-5
    assert r["binding_side"] == "Left"
    assert r["left_polynomial"] == "a + a^2 + a^3 + a^5 + a^7"


def test_eval_identity_parameter():
    r = result("eval", "--a", "1/3", "--x", "5/7", "--exact")
    assert r["value"] == "5/7"


def test_eval_tolerance_and_csv():
    r = result("eval", "--a", "5/6", "--x", "2/7", "--tol", "1/1000000")
    assert r["mode"] == "approx"
    exact = result("eval", "--a", "5/6", "--x", "2/7")
    assert abs(r["value_float"] - exact["value_float"]) <= 1e-6
    code, out, _ = call("eval", "--a", "1/2", "--x", "1/4", "--csv", "--no-timing")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["value"] == "1/3"


def test_decimal_inputs_are_exact_with_warning():
    code, out, err = call("classify", "--a", "0.55", "--x", "3/4", "--no-timing")
    env = json.loads(out)
    assert code == 0 and env["inputs"]["a"] == "11/20"
    assert any("11/20" in w for w in env["warnings"])


def test_ternary_digit_input():
    a = result("eval", "--a", "3/5", "--x", "0.(20)")
    b = result("eval", "--a", "3/5", "--x", "3/4")
    assert a["value"] == b["value"]
    c = result("eval", "--a", "3/5", "--x", "0.2", "--ternary")
    assert c["x_value"] == "2/3"


def test_constants():
    r = result("constants")
    assert abs(r["a0"]["mid"] - 0.5592) < 5e-5 and abs(r["rho"]["mid"] - 0.6180) < 5e-5
    r = result("constants", "--poly=-1,1,2,-1", "--interval", "1/2:1")
    assert abs(r["bracket"]["mid"] - 0.5550) < 5e-5
    assert abs(result("constants", "--multinacci", "3")["a_3"]["mid"] - 0.5437) < 1e-4


def test_dim():
    r = result("dim", "--set", "N", "--a", "1/2")
    assert abs(r["point"] - (0.6309297535714574**2)) < 1e-12 and r["method"] == "ClosedForm"
    r = result("dim", "--set", "Dinf", "--a", "13/25", "--entropy-depth", "12")
    assert abs(r["lower"] - 0.4380) < 1e-4 and abs(r["upper"] - 0.5546) < 1e-4
    assert r["method"] == "EntropyCount"
    assert result("dim", "--set", "graph-box", "--a", "5/6")["point"] == pytest.approx(1.7712, abs=1e-4)


def test_dim_sweep_csv():
    code, out, _ = call("dim", "--set", "D0", "--sweep", "1/2:2/3:1/12", "--no-timing")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["a", "value", "lower", "upper"]
    assert [r[0] for r in rows[1:]] == ["1/2", "7/12", "2/3"]
    assert float(rows[-1][1]) == 0.0


def test_beta_subcommands():
    assert result("beta", "greedy-one", "--a", "rho")["digits"] == "(10)"
    assert result("beta", "unique", "--lambda", "11/20", "--omega", "(10)")["status"] == "InU"
    assert result("beta", "unique", "--lambda", "63/100", "--omega", "(10)")["status"] == "NotInU"
    assert result("beta", "thue-morse", "--n", "8")["word"] == "01101001"
    assert result("beta", "tails", "--a", "29/50")["tails"] == [{"binary": "(10)", "ternary": "0.(20)"}]


def test_graph_file_output(tmp_path):
    path = tmp_path / "g.csv"
    code, out, _ = call("graph", "--a", "3/4", "--depth", "2", "--out", str(path), "--csv", "--no-timing")
    assert code == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["x", "y"] and len(rows) == 3**2 + 2
    assert rows[1] == ["0", "0"] and rows[-1] == ["1", "1"]
    path = tmp_path / "g.json"
    assert call("graph", "--a", "3/4", "--depth", "1", "--out", str(path), "--json", "--no-timing")[0] == 0
    data = json.loads(path.read_text())
    assert len(json.dumps(data)) > 0


@pytest.mark.parametrize(
    "argv,code,err_code",
    [
        (["bogus"], 2, "usage_error"),
        (["eval", "--a", "1/2"], 2, "usage_error"),
        (["eval", "--a", "1/2", "--x", "0.(31)"], 2, "parse_error"),
        (["eval", "--a", "2", "--x", "1/2"], 3, "domain_error"),
        (["dim", "--set", "Dinf", "--a", "3/5", "--entropy-depth", "10"], 0, None),
        (["beta", "tails", "--a", "1/2"], 3, "regime_error"),
        (["graph", "--a", "3/4", "--depth", "13", "--out", "-"], 4, "resource_error"),
        (["dim", "--set", "words", "--a", "13/25", "--n", "41"], 4, "resource_error"),
    ],
)
def test_exit_codes(argv, code, err_code):
    got, out, err = call(*argv)
    assert got == code
    if err_code:
        assert out == ""
        assert json.loads(err)["error"]["code"] == err_code


def test_output_is_deterministic():
    argv = ("classify", "--a", "11/20", "--x", "0.0220(2000202)", "--no-timing")
    assert call(*argv)[1] == call(*argv)[1]
    code, out, _ = call("constants")
    assert "timing" in json.loads(out)


def test_registry_covers_each_operation_once():
    names = [op for ops in cli.REGISTRY.values() for op in ops]
    assert len(names) == len(set(names))
    assert set(cli.REGISTRY) == {"eval", "graph", "classify", "critical", "constants", "dim", "beta"}
    for name in names:
        mod, attr = name.split(".")
        assert callable(getattr(importlib.import_module(f"okamoto.{mod}"), attr))


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "okamoto", "beta", "thue-morse", "--n", "4", "--no-timing"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["word"] == "0110"
