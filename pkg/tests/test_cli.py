import csv
import io
import json
import subprocess
import sys

import pytest

from holozero.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_triple_zero(capsys):
    code, out, _ = run(capsys, "count", "--expr", "z^3", "--rect", "-1,1,-1,1")
    assert code == 0
    assert json.loads(out)["count"] == 3


def test_count_grid_demo(capsys):
    code, out, _ = run(capsys, "count", "--demo", "grid100", "--rect", "-1,1,-1,1")
    assert code == 0 and json.loads(out)["count"] == 100


def test_count_corner_zero_names_edge(capsys):
    code, out, _ = run(capsys, "count", "--expr", "z", "--rect", "0,1,0,1")
    doc = json.loads(out)
    assert code == 2
    assert doc["status"] == "failed" and doc["reason"] == "quadrature-failure"
    assert doc["edge"] in ([[0, 0], [1, 0]], [[0, 1], [0, 0]])


def test_count_pole_is_noninteger(capsys):
    code, out, _ = run(capsys, "count", "--expr", "1/z", "--dexpr", "-1/z^2", "--rect", "-1,1,-1,1")
    assert code == 3 and json.loads(out)["reason"] == "non-integer"


@pytest.mark.parametrize(
    "argv",
    [
        ["count"],
        ["count", "--expr", "z", "--demo", "grid100"],
        ["count", "--expr", "z+", "--rect", "0,1,0,1"],
        ["count", "--expr", "w", "--rect", "0,1,0,1"],
        ["count", "--expr", "z", "--rect", "0,1,0"],
        ["count", "--expr", "z", "--rect", "1,0,0,1"],
        ["count", "--expr", "z"],
        ["count", "--demo", "nosuch"],
        ["find", "--expr", "z", "--rect", "0,1,0,1", "--format", "xml"],
        ["frobnicate"],
    ],
)
def test_bad_usage_exit_64(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == 64


def test_find_explicit_factors(capsys):
    code, out, _ = run(capsys, "find", "--expr", "(z-0.25-0.25i)*(z-0.75-0.75i)", "--rect", "0,1,0,1")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "ok" and doc["count"] == 2
    locs = [complex(z["re"], z["im"]) for z in doc["zeros"]]
    assert abs(locs[0] - (0.25 + 0.25j)) < 1e-12 and abs(locs[1] - (0.75 + 0.75j)) < 1e-12
    assert list(doc["zeros"][0]) == ["re", "im", "multiplicity", "residue_re", "residue_im", "refined", "kind"]
    assert doc["config"]["derivative_free"] is True


def test_find_with_dexpr_and_polish(capsys):
    code, out, _ = run(capsys, "find", "--expr", "z^2-0.25", "--dexpr", "2*z", "--rect", "-1,1,-1,1",
                       "--polish", "--max-per-region", "1")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 2
    assert doc["config"]["max_per_region"] == 1 and doc["config"]["polish"] is True


def test_find_annular_count_field(capsys):
    code, out, _ = run(capsys, "find", "--demo", "annular")
    doc = json.loads(out)
    assert code == 0
    assert doc["count"] == sum(z["multiplicity"] for z in doc["zeros"]) == doc["argument_principle_count"]


def test_find_sheets_labels(capsys):
    code, out, _ = run(capsys, "find", "--demo", "sheets", "--rect", "-5,5,-5,5")
    doc = json.loads(out)
    assert code == 0
    assert all(z["sheet"] in "+-" for z in doc["zeros"])
    near = [z for z in doc["zeros"] if abs(complex(z["re"], z["im"]) - 1.5999783j) < 1e-6]
    assert len(near) == 1 and near[0]["sheet"] == "+"


def test_find_boundary_zero_reports_failure(capsys):
    code, out, err = run(capsys, "find", "--expr", "z-0.5", "--dexpr", "1", "--rect", "0,1,0,1")
    doc = json.loads(out)
    assert code == 2 and doc["status"] == "failed"
    assert doc["error"]["type"] == "BoundaryZeroError" and doc["zeros"] == []


def test_json_round_trip(capsys, tmp_path):
    path = tmp_path / "doc.json"
    code, _, _ = run(capsys, "find", "--demo", "compfunc", "--n", "4", "--out", str(path))
    text = path.read_text()
    assert json.dumps(json.loads(text), indent=2, ensure_ascii=False) + "\n" == text


def test_seeded_runs_are_byte_identical(capsys):
    argv = ["find", "--expr", "z*(z-0.7)*(z+0.7)", "--dexpr", "3*z^2-0.49", "--rect", "-1,1,-1,1",
            "--max-per-region", "1", "--seed", "5"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    doc = json.loads(first)
    assert doc["config"]["seed"] == 5 and doc["count"] == 3


def test_timing_only_on_request(capsys):
    _, out, _ = run(capsys, "find", "--demo", "compfunc", "--timing")
    assert json.loads(out)["timing"]["elapsed_s"] >= 0


def test_csv_output(capsys):
    code, out, _ = run(capsys, "find", "--demo", "compfunc", "--n", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 3
    assert out.splitlines()[0] == "re,im,multiplicity,residue_re,residue_im,refined,kind"


def test_plot_data(capsys, tmp_path):
    path = tmp_path / "plot.json"
    code, out, _ = run(capsys, "find", "--demo", "grid100", "--plot-data", str(path))
    plot = json.loads(path.read_text())
    assert code == 0
    assert len(plot["zeros"]) == 100 and plot["poles"] == []
    assert plot["rect"] == [-1, 1, -1, 1]
    accepted = [r for r in plot["regions"] if r["status"] == "solved"]
    assert sum(r["count"] for r in accepted) == 100


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("HOLOZERO_THREADS", "3")
    _, a, _ = run(capsys, "find", "--demo", "grid100")
    monkeypatch.delenv("HOLOZERO_THREADS")
    _, b, _ = run(capsys, "find", "--demo", "grid100")
    assert a == b


def test_resolvent_pole_mode(capsys):
    code, out, _ = run(capsys, "find", "--demo", "circulant-resolvent", "--depth", "5")
    doc = json.loads(out)
    assert code == 0 and doc["mode"] == "poles"
    assert sum(1 for z in doc["zeros"] if z["kind"] == "pole") == 50


def test_benchmark_rows(capsys):
    code, out, _ = run(capsys, "benchmark", "--n", "3", "--tolerances", "1e-6,1e-10")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert out.splitlines()[0] == "method,tolerance,eval_count,max_zero_error"
    assert [r["method"] for r in rows] == ["aaa", "delves-lyness"] * 2
    for aaa, dl in zip(rows[::2], rows[1::2]):
        assert int(aaa["eval_count"]) < int(dl["eval_count"])


def test_benchmark_single_zero(capsys):
    code, out, _ = run(capsys, "benchmark", "--n", "0", "--tolerances", "1e-8")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and all(float(r["max_zero_error"]) < 1e-8 for r in rows)


def test_demos_list(capsys):
    code, out, _ = run(capsys, "demos")
    assert code == 0
    for name in ("grid100", "quasirandom100", "annular", "sheets", "circulant-det",
                 "circulant-resolvent", "funcchoice"):
        assert name in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "holozero", "count", "--expr", "z^2", "--rect", "-1,1,-1,1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 2
