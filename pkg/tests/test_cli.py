import csv
import io
import json
import math
import subprocess
import sys

import pytest

from kirchhoff import cli
from kirchhoff.errors import NumericError
from oracles import abc, lam_star, q1, q2, w3_sq


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def as_json(*argv):
    code, out, err = invoke(*argv, "--format", "json")
    return code, (json.loads(out) if out else None), err


def table(doc):
    return {row[0]: row[1] for row in doc["rows"]}


def test_constants_p1():
    code, doc, _ = as_json("constants", "--p", 1)
    assert code == 0
    vals = table(doc)
    assert vals["A"] == pytest.approx(math.pi / 2, rel=1e-12)
    assert vals["B"] == pytest.approx(math.pi / 4, rel=1e-12)
    assert vals["C"] == pytest.approx(math.pi / 4, rel=1e-12)
    assert "eta" in doc["meta"]["omitted"]


def test_constants_p3_has_mu1():
    _, doc, _ = as_json("constants", "--p", 3)
    assert table(doc)["mu1"] == pytest.approx(w3_sq(), rel=1e-13)


def test_constants_p05_omits_mu1():
    _, doc, _ = as_json("constants", "--p", 0.5)
    assert "mu1" not in table(doc)
    assert doc["meta"]["omitted"]["mu1"] == "requires p > 1"


def test_domain_error_exit_code():
    code, out, err = invoke("constants", "--p", -1)
    assert code == 2 and out == "" and "p" in err


def test_usage_error_exit_code():
    code, _, _ = invoke("constants")
    assert code == 2


def test_curve_tags():
    _, doc, _ = as_json("curve", "--a", 1, "--b", 1, "--p", 5, "--xi-min", 0.1, "--xi-max", 10, "--n", 30)
    assert doc["meta"]["shape"] == "decreasing"
    _, doc, _ = as_json("curve", "--a", 1, "--b", 1, "--p", 2, "--xi-min", 0.1, "--xi-max", 10, "--n", 400)
    assert doc["meta"]["shape"] == "U-shaped"
    rows = doc["rows"]
    i = min(range(len(rows)), key=lambda k: rows[k][1])
    assert rows[i - 1][0] <= q1() / q2() <= rows[i + 1][0]


def test_curve_n1_is_exit_2():
    code, _, _ = invoke("curve", "--a", 1, "--b", 1, "--p", 2, "--xi-min", 0.1, "--xi-max", 10, "--n", 1)
    assert code == 2


def test_solve_p2_tangency():
    code, doc, _ = as_json("solve", "--a", 1, "--b", 1, "--p", 2, "--lambda", repr(lam_star(1, 1)))
    assert code == 0 and doc["meta"]["count"] == 1
    assert doc["rows"][0][1] == pytest.approx(q1() / q2(), rel=1e-10)


def test_solve_p3_threshold_has_no_branch():
    a3, b3, _ = abc(3.0)
    code, doc, _ = as_json("solve", "--a", 1, "--b", 1, "--p", 3, "--lambda", repr(4 * a3**3 * b3))
    assert code == 0 and doc["meta"]["count"] == 0 and doc["rows"] == []


def test_solve_p1():
    lam = math.pi**2 / 4 * 1.5
    code, doc, _ = as_json("solve", "--a", 1, "--b", 1, "--p", 1, "--lambda", repr(lam))
    assert code == 0 and doc["meta"]["count"] == 1
    xi = 4 / math.pi**2 * math.sqrt(lam - math.pi**2 / 4)
    row = dict(zip(doc["columns"], doc["rows"][0]))
    assert row["xi"] == pytest.approx(xi, rel=1e-13)
    assert row["max_residual"] <= 1e-5


def test_eigen_p3():
    a3, _, c3 = abc(3.0)
    _, doc, _ = as_json("eigen", "--p", 3)
    vals = table(doc)
    assert vals["mu1"] == pytest.approx(w3_sq(), rel=1e-13)
    assert vals["zeta"] == pytest.approx((a3 / (2 * c3)) ** 0.25, rel=1e-13)


def test_eigen_regime_error():
    assert invoke("eigen", "--p", 0.7)[0] == 2


def test_profile_three_nodes_csv():
    code, out, _ = invoke("profile", "--p", 2, "--n", 3)
    assert code == 0
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(body))
    assert rows[0] == ["x", "value"]
    assert [float(v) for v in rows[1]] == [-1.0, 0.0]
    assert float(rows[2][0]) == 0.0 and float(rows[2][1]) == pytest.approx(q1(), rel=1e-13)
    assert [float(v) for v in rows[3]] == [1.0, 0.0]
    assert "# schema_version: 1" in out


def test_verify_two_branches_pass():
    lam = 1.5 * lam_star(1, 1)
    code, doc, _ = as_json("verify", "--a", 1, "--b", 1, "--p", 2, "--lambda", repr(lam), "--n", 2001)
    assert code == 0
    assert doc["checks"]["passed"] and doc["checks"]["branches"] == 2


def test_verify_failure_is_exit_1():
    # The p < 1 wall layer pushes the FD residual above its tolerance.
    code, doc, err = as_json("verify", "--a", 1, "--b", 1, "--p", 0.5, "--lambda", 3, "--n", 2001)
    assert code == 1
    assert doc["checks"]["failed"] == ["residual_unique"]
    assert "residual_unique" in err


def test_numeric_failure_is_exit_3(monkeypatch):
    def boom(*_):
        raise NumericError("no bracket", {"step": 1})

    monkeypatch.setattr(cli, "cmd_eigen", boom)
    code, _, err = invoke("eigen", "--p", 2)
    assert code == 3 and "no bracket" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("constants", "--p", 2.5),
        ("profile", "--p", 3, "--n", 11),
        ("curve", "--a", 1, "--b", 2, "--p", 1.5, "--xi-min", 0.2, "--xi-max", 5, "--n", 7),
        ("solve", "--a", 1, "--b", 1, "--p", 5, "--lambda", 10, "--n", 201),
        ("eigen", "--p", 4),
    ],
)
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_deterministic_output(argv, fmt):
    first = invoke(*argv, "--format", fmt)
    second = invoke(*argv, "--format", fmt)
    assert first == second and first[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ("constants", "--p", 0.5),
        ("curve", "--a", 1, "--b", 2, "--p", 1.5, "--xi-min", 0.2, "--xi-max", 5, "--n", 7),
        ("solve", "--a", 1, "--b", 1, "--p", 2, "--lambda", 20, "--n", 201),
    ],
)
def test_json_round_trip(argv):
    _, out, _ = invoke(*argv, "--format", "json")
    assert json.dumps(json.loads(out), indent=2) + "\n" == out


def test_csv_column_count_constant():
    _, out, _ = invoke("curve", "--a", 1, "--b", 1, "--p", 2, "--xi-min", 0.1, "--xi-max", 10, "--n", 20)
    rows = list(csv.reader(ln for ln in out.splitlines() if not ln.startswith("#")))
    assert len({len(r) for r in rows}) == 1 and len(rows) == 21


def test_csv_floats_round_trip():
    _, out, _ = invoke("constants", "--p", 2)
    rows = list(csv.reader(ln for ln in out.splitlines() if not ln.startswith("#")))
    vals = {r[0]: r[1] for r in rows[1:]}
    _, doc, _ = as_json("constants", "--p", 2)
    assert float(vals["A"]) == table(doc)["A"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kirchhoff", "constants", "--p", "3", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "constants"
