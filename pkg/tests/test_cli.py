import json
import subprocess
import sys

import pytest

from hodgeham.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hodge_writes_report(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, err = run(capsys, "hodge", "--k", "2", "--nmax", "3", "--degmax", "4", "--module", "regular", "--out", str(path))
    assert code == 0, err
    data = json.loads(path.read_text())
    assert data["algebra"] == {"k": 2, "module": "regular"}
    assert all(c["status"] == "pass" for c in data["checks"])
    assert out == ""


def test_hodge_csv_to_stdout(capsys):
    code, out, _ = run(capsys, "hodge", "--k", "1", "--nmax", "2", "--degmax", "2", "--format", "csv", "--jobs", "1")
    assert code == 0
    assert out.splitlines()[0].startswith("n,i,degree")


def test_missing_k_is_usage_error(capsys):
    code, _, err = run(capsys, "hodge", "--nmax", "3", "--degmax", "4")
    assert code == 2
    assert "usage:" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["hodge", "--k", "0", "--nmax", "2", "--degmax", "2"],
        ["hodge", "--k", "1", "--nmax", "2", "--degmax", "2", "--module", "var:3"],
        ["hodge", "--k", "1", "--nmax", "2", "--degmax", "2", "--format", "xml"],
        ["verify", "no-such-suite"],
        ["verify"],
        ["verify", "appendix", "--suite", "qkernel"],
        ["frobnicate"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_cap_refusal_names_cell(capsys):
    code, _, err = run(capsys, "hodge", "--k", "3", "--nmax", "5", "--degmax", "8")
    assert code == 3
    assert "refused: cell n=" in err


def test_small_cap_flag(capsys):
    code, _, err = run(capsys, "hodge", "--k", "1", "--nmax", "3", "--degmax", "4", "--cap", "5")
    assert code == 3 and "n=" in err


def test_verify_deriv_growth_prints_norms(capsys):
    code, out, _ = run(capsys, "verify", "deriv-growth", "--p", "0", "--nmax", "40")
    assert code == 0
    norms = next(line for line in out.splitlines() if "norms:" in line)
    assert [int(x) for x in norms.split("norms:")[1].split()] == list(range(1, 41))


def test_verify_small_suites(capsys, tmp_path):
    assert run(capsys, "verify", "--suite", "idempotents", "--nmax", "4")[0] == 0
    code, out, _ = run(capsys, "verify", "qkernel", "--degmax", "10")
    assert code == 0 and out.startswith("PASS ")
    path = tmp_path / "v.json"
    assert run(capsys, "verify", "hh1-iso", "--k", "1", "--degmax", "4", "--out", str(path))[0] == 0
    assert json.loads(path.read_text())["checks"]
    csv_path = tmp_path / "omega.csv"
    run(capsys, "verify", "hh1-iso", "--k", "1", "--degmax", "3", "--format", "csv", "--out", str(csv_path))
    assert csv_path.read_text().splitlines()[0] == "degree,dim_ideal,rank_tau,dim_omega,dim_hh1"


def write_report(capsys, path, *extra):
    code, _, _ = run(capsys, "hodge", "--k", "2", "--nmax", "2", "--degmax", "3", "--out", str(path), *extra)
    assert code == 0


def test_diff(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_report(capsys, a)
    write_report(capsys, b)
    assert run(capsys, "diff", str(a), str(b))[0] == 0
    data = json.loads(b.read_text())
    data["cells"][0]["dim_homology"] += 1
    b.write_text(json.dumps(data))
    code, out, _ = run(capsys, "diff", str(a), str(b))
    assert code == 1
    c = data["cells"][0]
    assert f"n={c['n']},i={c['i']},N={c['degree']}" in out


def test_diff_bad_inputs(capsys, tmp_path):
    a = tmp_path / "a.json"
    write_report(capsys, a)
    assert run(capsys, "diff", str(a), str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"cells": []}')
    assert run(capsys, "diff", str(a), str(bad))[0] == 2
    bad.write_text("not json")
    assert run(capsys, "diff", str(bad), str(a))[0] == 2


def test_reports_identical_across_jobs(capsys, tmp_path):
    outs = []
    for jobs in ("1", "2", "1"):
        path = tmp_path / f"r{len(outs)}.json"
        write_report(capsys, path, "--jobs", jobs)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_jobs_environment(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("HODGEHAM_JOBS", "2")
    write_report(capsys, tmp_path / "env.json")
    monkeypatch.setenv("HODGEHAM_JOBS", "many")
    code, _, err = run(capsys, "hodge", "--k", "1", "--nmax", "1", "--degmax", "1")
    assert code == 2 and "HODGEHAM_JOBS" in err
    # the flag wins over the environment
    assert run(capsys, "hodge", "--k", "1", "--nmax", "1", "--degmax", "1", "--jobs", "1")[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hodgeham", "verify", "qkernel", "--degmax", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.count("PASS") >= 1
