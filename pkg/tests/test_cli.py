import json
import subprocess
import sys

import pytest

from anglechains.cli import main
from anglechains.constructions import gen_lenz
from anglechains.counting import count_pairs_at_distance

SQUARE_JSON = '{"dim":2,"points":[[0,0],[1,0],[1,1],[0,1]]}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def square(tmp_path):
    p = tmp_path / "sq.json"
    p.write_text(SQUARE_JSON)
    return p


def test_count_square(capsys, square):
    code, out, _ = run(capsys, "count", "--input", str(square), "--angles", "pi/2", "--method", "brute",
                       "--distinct", "full")
    rep = json.loads(out)
    assert code == 0 and rep["count"] == "8" and rep["method"] == "brute" and rep["distinct"] == "full"
    assert set(rep) >= {"count", "n", "k", "method", "distinct", "tol", "elapsed_s"}
    assert out.count("\n") == 1


def test_generate_then_count_distance(capsys, tmp_path):
    out_path = tmp_path / "lenz.json"
    code, out, _ = run(capsys, "generate", "--construction", "lenz", "--n", "10", "--out", str(out_path))
    assert code == 0 and json.loads(out)["points"] == 10
    code, out, _ = run(capsys, "count", "--input", str(out_path), "--distance", "1.4142135624", "--tol", "1e-6")
    assert code == 0 and json.loads(out)["count"] == "25"


def test_counts_equal_library(capsys, tmp_path):
    out_path = tmp_path / "lenz.json"
    run(capsys, "generate", "--construction", "lenz", "--n", "100", "--out", str(out_path))
    _, out, _ = run(capsys, "count", "--input", str(out_path), "--distance", "1.4142135623730951")
    assert int(json.loads(out)["count"]) == count_pairs_at_distance(gen_lenz(100).points, 2 ** 0.5)


def test_out_of_range_angle_is_usage_error(capsys, square):
    with pytest.raises(SystemExit) as e:
        main(["count", "--input", str(square), "--angles", "pi"])
    assert e.value.code == 2
    assert "OutOfRange" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--angles", "pi/2"],
        ["count", "--input", "x.json"],
        ["count", "--input", "x.json", "--angles", "pi/2", "--distance", "1"],
        ["count", "--input", "x.json", "--angles", "pi/2", "--method", "fast"],
        ["count", "--input", "x.json", "--angles", "pi/2", "--pin", "last:1"],
        ["generate", "--construction", "nope", "--n", "5", "--out", "x"],
        ["sweep", "--construction", "lenz", "--n-grid", "a,b"],
        ["frobnicate"],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2
    assert capsys.readouterr().err


def test_runtime_errors_exit_one(capsys, tmp_path, square):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim":2,"points":[[0,0,1]]}')
    code, _, err = run(capsys, "count", "--input", str(bad), "--angles", "pi/2")
    assert code == 1 and "FormatError" in err
    code, _, err = run(capsys, "count", "--input", str(square), "--angles", "pi/2,pi/2", "--method", "dp",
                       "--distinct", "full")
    assert code == 1 and "UnsupportedSemantics" in err
    code, _, err = run(capsys, "sweep", "--construction", "lenz", "--n-grid", "10")
    assert code == 1 and "InvalidParams" in err


def test_csv_and_pins(capsys, tmp_path):
    p = tmp_path / "sq.csv"
    p.write_text("0,0\n1,0\n1,1\n0,1\n")
    _, out, _ = run(capsys, "count", "--input", str(p), "--dim", "2", "--angles", "90deg", "--pin", "first:0")
    assert json.loads(out)["count"] == "2"
    _, out, _ = run(capsys, "count", "--input", str(p), "--dim", "2", "--angles", "pi/2", "--pin", "middle:0")
    assert json.loads(out)["count"] == "2"
    _, out, _ = run(capsys, "count", "--input", str(p), "--dim", "2", "--rich-lines", "2")
    assert json.loads(out)["count"] == "6"


def test_pin_from_file(capsys, tmp_path):
    p = tmp_path / "r3.json"
    run(capsys, "generate", "--construction", "pinned-right-r3", "--n", "10", "--out", str(p))
    _, out, _ = run(capsys, "count", "--input", str(p), "--angles", "pi/2", "--pin", "first")
    assert int(json.loads(out)["count"]) >= 25


def test_witnesses(capsys, square):
    _, out, _ = run(capsys, "count", "--input", str(square), "--angles", "pi/2", "--witnesses", "3")
    assert len(json.loads(out)["witnesses"]) == 3


def test_sweep_report(capsys):
    code, out, _ = run(capsys, "sweep", "--construction", "lenz", "--n-grid", "10,20")
    rep = json.loads(out)
    assert code == 0 and [s["count"] for s in rep["samples"]] == ["25", "100"]
    assert rep["fit"]["slope"] == pytest.approx(2.0, abs=1e-12)


def test_search_report(capsys, tmp_path):
    out_path = tmp_path / "best.json"
    code, out, _ = run(capsys, "search", "--d", "2", "--n", "9", "--angles", "pi/2", "--iters", "20",
                       "--seed", "3", "--target", "2", "--out", str(out_path))
    rep = json.loads(out)
    assert code == 0 and rep["best_score"] >= rep["initial_score"]
    assert out_path.exists()


def test_validate(capsys, tmp_path, square):
    code, out, _ = run(capsys, "validate", "--construction", "right-r6", "--n", "18", "--k", "2")
    assert code == 0 and json.loads(out)["checked"] == 81
    code, out, _ = run(capsys, "validate", "--input", str(square))
    assert code == 0 and json.loads(out)["valid"]
    dup = tmp_path / "dup.json"
    dup.write_text('{"dim":2,"points":[[0,0],[0,0]]}')
    code, out, _ = run(capsys, "validate", "--input", str(dup))
    assert code == 1 and not json.loads(out)["valid"]


def test_module_entry_point(square):
    r = subprocess.run([sys.executable, "-m", "anglechains.cli", "count", "--input", str(square), "--angles", "pi/2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["count"] == "8"
    r = subprocess.run([sys.executable, "-m", "anglechains.cli", "count", "--angles", "pi"],
                       capture_output=True, text=True)
    assert r.returncode == 2
