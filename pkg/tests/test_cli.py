import csv
import io
import json
import math
import subprocess
import sys
from importlib import resources

import jsonschema
import numpy as np
import pytest

from helix_mobius.cli import ROOT_COLUMNS, SWEEP_COLUMNS, main
from helix_mobius.curve_energy import write_curve_csv


@pytest.fixture(scope="module")
def schema():
    text = resources.files("helix_mobius").joinpath("schemas/output.schema.json").read_text()
    return json.loads(text)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_density_csv(capsys):
    code, out, _ = run(capsys, "density", "--rho", "1", "--tol", "1e-9")
    assert code == 0
    (row,) = rows_of(out)
    assert abs(float(row["value"]) - 0.80450482679217823768) < 1e-9
    assert row["method"] == "quadrature" and row["certified"] == "true"


def test_roots_with_oracle(capsys):
    code, out, _ = run(capsys, "roots", "--rho", "0.05", "--kmax", "100", "--oracle")
    assert code == 0
    header = out.splitlines()[0].split(",")
    assert header[:9] == ROOT_COLUMNS
    rows = rows_of(out)
    assert len(rows) == 100
    assert all(r["certified"] == "true" for r in rows)
    assert max(float(r["oracle_diff"]) for r in rows) < 1e-9


def test_roots_header_without_oracle(capsys):
    _, out, _ = run(capsys, "roots", "--rho", "0.3", "--kmax", "2")
    assert out.splitlines()[0] == ",".join(ROOT_COLUMNS)


def test_series_both_modes(capsys):
    _, out, _ = run(capsys, "series", "--rho", "0.5", "--tol", "1e-9")
    _, out2, _ = run(capsys, "series", "--rho", "0.5", "--tol", "1e-9", "--approx")
    r, a = rows_of(out)[0], rows_of(out2)[0]
    assert r["method"] == "residue_series" and a["method"] == "approx_series"
    assert abs(float(r["value"]) - 2.3689525480388881362) < 2e-9


def test_sweep_header_and_ratios(capsys):
    code, out, _ = run(capsys, "sweep", "--rho-min", "1e-4", "--rho-max", "1e-3", "--steps", "2",
                       "--grid", "log", "--tol", "1e-8")
    assert code == 0
    assert out.splitlines()[0] == ",".join(SWEEP_COLUMNS)
    rows = rows_of(out)
    assert [float(r["rho"]) for r in rows] == pytest.approx([1e-4, 1e-3])
    assert rows[0]["i_quad"] == ""  # quadrature is skipped below 1e-3
    dev = [abs(float(r["ratio_small"]) - 1) for r in rows]
    assert dev[0] < dev[1]


def test_deterministic_across_threads(capsys):
    argv = ["sweep", "--rho-min", "0.2", "--rho-max", "2", "--steps", "4", "--grid", "linear"]
    _, a, _ = run(capsys, *argv, "--threads", "1")
    _, b, _ = run(capsys, *argv, "--threads", "4")
    assert a == b


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "sandwich")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 8 and all(r["passed"] == "true" for r in rows)
    assert all(float(r["margin"]) >= 0 for r in rows)


def test_contour(capsys):
    code, out, _ = run(capsys, "contour", "--rho", "0.5", "--kmax", "3")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 3 and all(r["passed"] == "true" for r in rows)


def test_curve_commands(capsys, tmp_path):
    t = np.linspace(0, 2 * np.pi, 17)[:-1]
    path = tmp_path / "circle.csv"
    write_curve_csv(path, t, np.c_[np.cos(t), np.sin(t), 0 * t], closed=True,
                    tangents=np.c_[-np.sin(t), np.cos(t), 0 * t])
    code, out, _ = run(capsys, "curve", "--input", str(path))
    assert code == 0
    vals = [float(r["value"]) for r in rows_of(out)]
    assert len(vals) == 16
    assert np.allclose(vals, 2 / math.pi, rtol=1e-4)
    code, out, _ = run(capsys, "curve", "--input", str(path), "--gradient")
    assert code == 0 and out.splitlines()[0] == "t,gx,gy,gz"


@pytest.mark.parametrize("argv", [
    ["density", "--rho", "1", "--format", "json"],
    ["roots", "--rho", "0.05", "--kmax", "5", "--oracle", "--format", "json"],
    ["series", "--rho", "1", "--approx", "--format", "json"],
    ["sweep", "--rho-min", "0.5", "--rho-max", "2", "--steps", "2", "--format", "json"],
    ["verify", "--suite", "brackets", "--format", "json"],
    ["contour", "--rho", "1", "--kmax", "2", "--format", "json"],
])
def test_json_validates(capsys, schema, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert doc["command"] == argv[0] and doc["rows"]


def test_json_nan_becomes_null(capsys):
    _, out, _ = run(capsys, "sweep", "--rho-min", "2", "--rho-max", "3", "--steps", "2", "--format", "json")
    rows = json.loads(out)["rows"]
    assert rows[0]["ref_small"] is None


def test_output_file(capsys, tmp_path):
    p = tmp_path / "out.csv"
    code, out, _ = run(capsys, "density", "--rho", "2", "--output", str(p))
    assert code == 0 and out == ""
    assert p.read_text().startswith("rho,value,")


def test_float_format(capsys):
    _, out, _ = run(capsys, "roots", "--rho", "0.05", "--kmax", "1")
    row = rows_of(out)[0]
    assert row["re_w"] == "%.17g" % (2 * math.pi)
    assert float(row["re_w"]) == 2 * math.pi


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["density"], ["density", "--rho", "-1"], ["density", "--rho", "abc"],
    ["roots", "--rho", "1", "--kmax", "0"], ["sweep", "--rho-min", "2", "--rho-max", "1", "--steps", "3"],
    ["density", "--rho", "1", "--format", "xml"], ["curve", "--input", "/nonexistent/file.csv"],
])
def test_usage_errors(capsys, schema, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    rec = json.loads(err.strip().splitlines()[-1])
    jsonschema.validate(rec, schema["$defs"]["error"])


def test_computation_failure(capsys):
    code, _, err = run(capsys, "density", "--rho", "1e-5", "--tol", "1e-12")
    assert code == 1
    assert json.loads(err)["error"]["kind"] == "CostGuardError"


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "helix_mobius", "density", "--rho", "3"],
                       capture_output=True, text=True, check=True)
    assert p.stdout.startswith("rho,value")
