import csv
import io
import json

import pytest

from gapeig.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def error_record(err):
    lines = err.strip().splitlines()
    assert len(lines) == 1
    return json.loads(lines[0])


def test_harmonic_study_csv(capsys):
    code, out, _ = run(capsys, "study", "--catalog", "harmonic", "--window", "0,6.5", "--scheme",
                       "one-sided:lambda0", "--L", "4,6,8,11", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    last = [float(r["lambda"]) for r in rows if r["n"] == "3"]
    assert last == pytest.approx([1.0, 3.0, 5.0], abs=1e-6)


def test_harmonic_study_json(capsys):
    argv = ("study", "--catalog", "harmonic", "--window", "0,6.5", "--scheme", "one-sided:lambda0",
            "--L", "4,6,8,11", "--reference", "3")
    code, out, _ = run(capsys, *argv)
    assert code == 0
    doc = json.loads(out)
    assert [t["converged"] for t in doc["trajectories"]] == [True, True, True]
    assert doc["checks"]["monotonicity"]["passed"]
    assert doc["checks"]["accumulation"]["verdict"] == "Stable"
    assert all(r["passed"] for r in doc["checks"]["residual"])
    assert run(capsys, *argv)[1] == out


def test_solve_box(capsys):
    code, out, _ = run(capsys, "solve", "--catalog", "dirichlet_box", "--window", "0.5,4.5")
    assert code == 0
    vals = json.loads(out)["per_n"][0]["eigenvalues"]
    assert vals == pytest.approx([1.0, 4.0], abs=1e-8)


def test_scheme_mismatch_exit_1(capsys):
    code, out, err = run(capsys, "study", "--catalog", "dirichlet_box", "--window", "0.5,4.5",
                         "--scheme", "one-sided:lambda0", "--count", "3")
    assert code == 1 and out == ""
    rec = error_record(err)
    assert rec["error"] == "SchemeMismatch" and rec["exit_code"] == 1


def test_output_file_and_table(capsys, tmp_path):
    path = tmp_path / "study.json"
    code, out, _ = run(capsys, "study", "--catalog", "harmonic", "--window", "0,6.5", "--L", "4,6,8",
                       "--output", str(path))
    assert code == 0 and "trajectory" in out
    assert json.loads(path.read_text())["config"]["truncations"] == [[-4.0, 4.0], [-6.0, 6.0], [-8.0, 8.0]]
    code, out, _ = run(capsys, "study", "--catalog", "harmonic", "--window", "0,6.5", "--L", "4,6,8",
                       "--format", "table", "--counts-only")
    assert code == 0 and out.splitlines()[0].split()[:4] == ["n", "a_n", "b_n", "count"]


def test_weyl(capsys):
    code, out, _ = run(capsys, "weyl", "--catalog", "harmonic", "--endpoint", "right", "--lambda", "1", "--x", "0")
    assert code == 0
    doc = json.loads(out)
    # the ground state is even, so the decaying direction at 0 has zero derivative
    assert abs(abs(doc["direction"][0]) - 1.0) < 1e-6 and doc["stabilized"]


def test_weyl_in_band_exit_2(capsys):
    code, _, err = run(capsys, "weyl", "--catalog", "mathieu_impurity", "--endpoint", "right",
                       "--lambda", "-0.3", "--x", "0")
    assert code == 2 and error_record(err)["error"] == "NonDecaying"


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--catalog", "dirichlet_box", "--N", "1000", "--window", "0.5,4.5")
    assert code == 0
    assert json.loads(out)["extrapolated"] == pytest.approx([1.0, 4.0], abs=1e-6)
    code, _, err = run(capsys, "oracle", "--catalog", "harmonic", "--window", "0,2")
    assert code == 1 and error_record(err)["exit_code"] == 1


def test_negative_values_parse(capsys):
    code, out, _ = run(capsys, "oracle", "--catalog", "harmonic", "--interval", "-8,8", "--N", "1000",
                       "--window", "-1,2")
    assert code == 0 and json.loads(out)["extrapolated"] == pytest.approx([1.0], abs=1e-5)


def test_jacobi(capsys):
    code, out, _ = run(capsys, "jacobi", "--override", "b0=2", "--window", "2.1,3", "--n", "4:8",
                       "--reference", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["per_n"][-1]["eigenvalues"] == pytest.approx([2.5], abs=1e-6)
    assert doc["checks"]["monotonicity"]["passed"]


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and "harmonic" in out and "mathieu_impurity" in out
    code, out, _ = run(capsys, "catalog", "harmonic")
    assert code == 0 and out.strip()
    code, _, err = run(capsys, "catalog", "nosuch")
    assert code == 1 and error_record(err)["exit_code"] == 1


def test_problem_file_round_trip(capsys, tmp_path):
    _, text, _ = run(capsys, "catalog", "dirichlet_box")
    path = tmp_path / "box.txt"
    path.write_text(text)
    code, out, _ = run(capsys, "solve", "--problem", str(path), "--window", "0.5,4.5")
    assert code == 0 and json.loads(out)["per_n"][0]["eigenvalues"] == pytest.approx([1.0, 4.0], abs=1e-8)


@pytest.mark.parametrize("argv", [
    [],
    ["study", "--catalog", "harmonic", "--window", "0,6.5", "--L", "x"],
    ["study", "--catalog", "harmonic", "--window", "0", "--L", "4,6,8"],
    ["study", "--catalog", "harmonic", "--problem", "p.txt", "--window", "0,1", "--L", "4,6,8"],
    ["study", "--catalog", "harmonic", "--window", "0,6.5", "--scheme", "sideways", "--L", "4,6,8"],
    ["study", "--catalog", "harmonic", "--window", "0,6.5", "--L", "4"],
    ["jacobi", "--override", "c0=2", "--window", "2.1,3", "--n", "4:8"],
    ["jacobi", "--a-expr", "0", "--window", "2.1,3", "--n", "4:8"],
    ["study", "--problem", "/nonexistent/problem.txt", "--window", "0,1", "--L", "4,6,8"],
    ["bogus"],
])
def test_input_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    rec = error_record(err)
    assert rec["exit_code"] == 1 and rec["message"]
