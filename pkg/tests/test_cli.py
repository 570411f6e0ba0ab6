import csv
import io
import json
import subprocess
import sys

import pytest

from flatrank.cli import main, parse_monomial


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_monomial_forms():
    assert parse_monomial("x0^2*x1*x2") == (2, 1, 1)
    assert parse_monomial("2,1,1") == (2, 1, 1)
    with pytest.raises(ValueError):
        parse_monomial("x0 + x1")


def test_flatten_prints_sparse_matrix(capsys):
    code, out, _ = run(capsys, "flatten", "--monomial", "x0^2*x1*x2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split()[:2] == ["15", "8"]
    assert all(len(line.split()) == 3 for line in lines[1:])


def test_flatten_polynomial_with_shape(capsys):
    code, out, _ = run(capsys, "flatten", "--poly", "x0^5*x1", "--shape", "1")
    assert code == 0 and out.split()[:2] == ["6", "2"]


def test_flatten_then_rank_round_trip(tmp_path, capsys):
    path = tmp_path / "m.txt"
    code, out, _ = run(capsys, "flatten", "--monomial", "2,1,1", "--out", str(path))
    assert code == 0 and "15x8" in out
    assert (tmp_path / "m.txt.rows").exists() and (tmp_path / "m.txt.cols").exists()
    code, out, _ = run(capsys, "rank", str(path), "--seed", "5")
    report = json.loads(out)
    assert report["rank"] == 8
    assert sorted(b["cols"] for b in report["per_block"]) == [1, 1, 1, 1, 1, 1, 2]
    code, direct, _ = run(capsys, "flatten", "--monomial", "2,1,1", "--format", "json", "--seed", "5")
    assert json.loads(direct) == report


def test_rank_output_is_deterministic(tmp_path, capsys):
    path = tmp_path / "m.txt"
    run(capsys, "flatten", "--monomial", "3,2,1", "--out", str(path))
    first = run(capsys, "rank", str(path), "--seed", "9")[1]
    second = run(capsys, "rank", str(path), "--seed", "9")[1]
    assert first == second
    assert json.loads(first)["rank"] == 12


def test_exit_codes(capsys):
    assert run(capsys, "flatten", "--monomial", "1,1", "--shape", "3")[0] == 2
    assert run(capsys, "flatten", "--poly", "x0^2 +")[0] == 2
    assert run(capsys, "flatten", "--poly", "x0^2 + x1")[0] == 2
    assert run(capsys, "certify", "--monomial", "2,2,2,1", "--cutoff", "50")[0] == 3
    assert run(capsys, "flatten", "--monomial", "2,2,2,1", "--cutoff", "50")[0] == 3
    code, _, err = run(capsys, "certify")
    assert code == 2 and "monomial" in err


def test_certify_json_and_csv(capsys):
    code, out, _ = run(capsys, "certify", "--monomial", "x0^2*x1^2*x2^2*x3")
    data = json.loads(out)
    assert (data["lower_full"], data["lower_partial"], data["upper"]) == (17, 18, 18)
    assert data["border_rank_determined"] is True
    code, out, _ = run(capsys, "certify", "--monomial", "2,1,1", "--monomial", "1,1,1,1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["monomial", "shape", "size", "m", "rank", "partial rank", "status"]
    assert rows[1][:6] == ["x0^2*x1*x2", "2,1", "15x8", "2", "8", "8"]
    assert rows[2][:6] == ["x0*x1*x2*x3", "3,2,1", "64x64", "8", "64", "64"]


def test_certify_shape_override(capsys):
    code, out, _ = run(capsys, "certify", "--monomial", "3,2,2,1", "--shape", "6,4,2", "--no-partial")
    data = json.loads(out)
    assert (data["rank_phi"], data["rank_power"], data["lower_full"]) == (486, 27, 18)


def test_table_and_poset(capsys, tmp_path):
    code, out, _ = run(capsys, "table", "--degree", "3")
    assert code == 0 and out.count("\n") == 3
    code, out, _ = run(capsys, "table", "--degree", "3", "--format", "json")
    assert [r["partial rank"] for r in json.loads(out)] == [2, 8]
    code, out, _ = run(capsys, "poset", "--degree", "4", "--format", "json")
    data = json.loads(out)
    assert len(data["nodes"]) == 5 and len(data["edges"]) == 4
    dot = tmp_path / "p.dot"
    assert run(capsys, "poset", "--degree", "6", "--out", str(dot))[0] == 0
    assert dot.read_text().startswith("digraph")
    code, out, _ = run(capsys, "poset", "--degree", "2")
    assert out.count("->") == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "flatrank", "certify", "--monomial", "1,1", "--format", "csv", "--strategy", "exact"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.splitlines()[1].split(",")[-2:] == ["2", "exact"]
