import json
import os
import subprocess
import sys

import pytest

from sunflower_lab.cli import run
from sunflower_lab.family import read_family


def test_bounds_er_prints_six(capsys):
    assert run(["bounds", "--thm", "er", "--k", "2", "--r", "3", "--quiet"]) == 0
    assert capsys.readouterr().out.strip() == "6"


def test_bounds_table_and_json(capsys):
    assert run(["--json", "bounds", "--thm", "er", "--k", "1..3", "--r", "3"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["value"] for r in rows] == ["2", "6", "32"]
    assert all(r["rounding_mode"] == "EXACT" for r in rows)


def test_bounds_constants_are_required(capsys):
    assert run(["bounds", "--thm", "kostochka", "--k", "20", "--r", "3", "--alpha", "2"]) == 2
    assert "--D" in capsys.readouterr().err
    assert run(["bounds", "--thm", "lower", "--s", "2"]) == 2
    assert run(["bounds", "--thm", "kostochka", "--k", "20", "--r", "3", "--alpha", "2", "--D", "1"]) == 0


def test_bounds_domain_error_exit_code():
    assert run(["bounds", "--thm", "kostochka", "--k", "10", "--r", "3", "--alpha", "2", "--D", "1"]) == 2


def test_bounds_help_reports_disagreement(capsys):
    assert run(["bounds", "--thm", "help", "--n", "0..3"]) == 1
    assert run(["bounds", "--thm", "help", "--n", "1..30"]) == 0


@pytest.mark.parametrize("thm,extra", [
    ("rw", ["--n", "10", "--s", "3"]), ("deza", ["--k", "3"]), ("main", ["--k", "2", "--s", "1..2"]),
    ("main2", ["--k", "40", "--ell", "20", "--alpha", "2", "--D", "1"]), ("main3", ["--k", "16", "--D", "1"]),
    ("help2", ["--n", "10"]), ("binom", ["--k", "1..5"]), ("recursion", ["--k", "3", "--s", "2"]),
    ("ahs", ["--k", "4", "--c", "1"]),
])
def test_every_bound_runs(thm, extra, capsys):
    assert run(["bounds", "--thm", thm] + extra) == 0
    assert capsys.readouterr().out.strip()


def test_construct_and_check_round_trip(tmp_path, capsys):
    out = tmp_path / "t.txt"
    assert run(["construct", "transversal", "--k", "3", "--r", "3", "-o", str(out)]) == 0
    assert len(read_family(out)) == 8
    assert run(["check", str(out), "--k", "3", "--L", "0,1,2"]) == 0
    assert run(["check", str(out), "--L", "1,2"]) == 1
    assert run(["check", str(out), "--ell", "1"]) == 1


def test_construct_product(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(["construct", "transversal", "--k", "1", "--r", "3", "-o", str(a)])
    run(["construct", "fano", "-o", str(b)])
    out = tmp_path / "p.txt"
    assert run(["construct", "product", "--a", str(a), "--b", str(b), "-o", str(out)]) == 0
    assert len(read_family(out)) == 14
    assert run(["construct", "product"]) == 2


def test_find_sunflower_exit_codes(tmp_path, capsys):
    fano = tmp_path / "fano.txt"
    run(["construct", "fano", "-o", str(fano)])
    assert run(["find-sunflower", str(fano), "--r", "3"]) == 0
    assert run(["find-sunflower", str(fano), "--r", "3", "--expect-free"]) == 1
    assert run(["find-sunflower", str(fano), "--r", "4"]) == 1
    assert run(["find-sunflower", str(fano), "--r", "4", "--expect-free"]) == 0
    capsys.readouterr()
    assert run(["--json", "find-sunflower", str(fano), "--r", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["kernel"] == [1] and len(data["petals"]) == 3


def test_malformed_file_reports_position(tmp_family_file, capsys):
    path = tmp_family_file("n=4\n1 2\n1 x\n")
    assert run(["check", path]) == 2
    assert "line 3, column 3" in capsys.readouterr().err


def test_usage_errors():
    assert run([]) == 2
    assert run(["bogus"]) == 2
    assert run(["search", "--k", "2"]) == 2


def test_search_and_witness(tmp_path, capsys):
    w = tmp_path / "w.txt"
    assert run(["search", "--k", "2", "--r", "3", "--nmax", "12", "--deterministic", "--witness-out", str(w)]) == 0
    assert len(read_family(w)) == 6


def test_search_over_all_L(capsys):
    assert run(["--json", "search", "--k", "3", "--r", "3", "--s", "2", "--nmax", "8"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["optimum"] == max(x["optimum"] for x in data["per_L"])
    assert len(data["per_L"]) == 3


def test_search_budget_and_resume(tmp_path, capsys):
    assert run(["--json", "search", "--k", "3", "--r", "3", "--nmax", "7", "--budget", "300"]) == 3
    part = tmp_path / "part.json"
    part.write_text(capsys.readouterr().out)
    assert run(["--json", "search", "--k", "3", "--r", "3", "--nmax", "7", "--resume", str(part)]) == 0
    resumed = json.loads(capsys.readouterr().out)
    assert run(["--json", "search", "--k", "3", "--r", "3", "--nmax", "7"]) == 0
    full = json.loads(capsys.readouterr().out)
    assert resumed["optimum"] == full["optimum"]
    assert resumed["nodes_explored"] == full["nodes_explored"]


def test_decompose_and_verify(tmp_path, capsys):
    fam = tmp_path / "t.txt"
    cert = tmp_path / "cert.json"
    run(["construct", "transversal", "--k", "2", "--r", "3", "-o", str(fam)])
    assert run(["decompose", str(fam), "--L", "0,1", "-o", str(cert)]) == 0
    assert run(["verify-cert", str(fam), str(cert)]) == 0
    data = json.loads(cert.read_text())
    data["certified_bound"] = "5"
    cert.write_text(json.dumps(data))
    assert run(["verify-cert", str(fam), str(cert)]) == 1


def test_decompose_ell_cover(tmp_family_file, capsys):
    path = tmp_family_file("n=6\n1 2 3\n1 2 4\n1 3 5\n2 3 6\n")
    assert run(["decompose", path, "--ell", "1", "--f0", "0"]) == 0
    assert json.loads(capsys.readouterr().out)["cover_holds"] is True
    assert run(["decompose", path]) == 2


def test_report_quick_runs(capsys):
    code = run(["report", "--reproduce-table", "--quick"])
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 9 and all(line.startswith(("PASS", "FAIL")) for line in lines)
    assert code == 1  # two criteria are red by construction of their expected values


def test_console_script_entry_point():
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "sunflower_lab.cli", "bounds", "--thm", "deza", "--k", "3", "--quiet"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and proc.stdout.strip() == "7"
