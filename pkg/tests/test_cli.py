import json
import subprocess
import sys

import pytest

from cyclegood.cli import main, run
from cyclegood.formats import read_coloring


def report(argv):
    status, text, _ = run(argv)
    return status, json.loads(text)


def test_generate_lower_bound(tmp_path):
    out = tmp_path / "c.txt"
    status, rep = report(["generate", "lower-bound", "--n", "6", "--sizes", "2,2,2", "--coloring-out", str(out)])
    assert status == 0
    assert rep["trace"][0]["formula"] == 11 and rep["trace"][0]["implied_lower_bound"] == 12
    assert read_coloring(str(out)).order == 11
    for key in ("command", "profile", "verdict", "witness", "trace", "seed", "elapsed_ms"):
        assert key in rep


def test_generate_general_needs_r():
    status, rep = report(["generate", "general", "--n", "6", "--sizes", "2,3,4"])
    assert status == 2 and rep["verdict"] == "usage-error"
    status, rep = report(["generate", "general", "--n", "6", "--sizes", "2,3,4", "--r", "2"])
    assert status == 0 and rep["witness"]["order"] == 9


def test_verify_refutes_and_finds_witness(tmp_path):
    f = tmp_path / "c.txt"
    run(["generate", "lower-bound", "--n", "6", "--sizes", "2,2,2", "--coloring-out", str(f)])
    status, rep = report(["verify", "--coloring", str(f), "--n", "6", "--sizes", "2,2,2"])
    assert status == 0 and rep["verdict"] == "refutes" and rep["witness"] is None
    status, rep = report(["verify", "--coloring", str(f), "--n", "5", "--sizes", "2,2,2"])
    assert status == 0 and rep["verdict"] == "red-cycle"


def test_oracle_command():
    status, rep = report(["oracle", "--n", "4", "--sizes", "2,2", "--nmax", "7"])
    assert status == 0 and rep["R"] == 6 and rep["witness"]["order"] == 5


def test_engine_command(tmp_path):
    f = tmp_path / "c.txt"
    run(["generate", "lower-bound", "--n", "6", "--sizes", "2,2,2", "--coloring-out", str(f)])
    status, rep = report(["engine", "main", "--coloring", str(f), "--n", "6", "--sizes", "2,2,2"])
    assert status == 0 and rep["verdict"] == "refuted"
    status, rep = report(["engine", "bipartite", "--coloring", str(f), "--n", "6", "--sizes", "2,2,2"])
    assert status == 2


def test_paper_profile_refuses_large_hosts(tmp_path):
    f = tmp_path / "c.txt"
    run(["generate", "lower-bound", "--n", "16", "--sizes", "2,2", "--coloring-out", str(f)])
    status, rep = report(["engine", "bipartite", "--profile", "paper", "--coloring", str(f), "--n", "16", "--sizes", "2,2"])
    assert status == 2 and "refuses" in rep["error"]


def test_gadget_command():
    status, rep = report(["gadget", "small", "--random", "100,0.8", "--m", "4", "--r", "3"])
    assert status == 0 and rep["verdict"] == "gadget"
    assert rep["witness"]["shortfall"] == 3


def test_selftest():
    status, rep = report(["selftest"])
    assert status == 0 and rep["verdict"] == "pass"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--coloring", "/nonexistent/file", "--n", "5", "--sizes", "1,1"],
        ["generate", "lower-bound", "--n", "5", "--sizes", "x"],
        ["oracle", "--n", "4", "--sizes", "2,2", "--nmax", "30"],
        ["nonsense"],
    ],
)
def test_usage_errors_exit_two(argv):
    assert run(argv)[0] == 2


def test_malformed_coloring_exits_two(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("red-of-complete 4\n0 9\n")
    assert run(["verify", "--coloring", str(f), "--n", "4", "--sizes", "1,1"])[0] == 2


def test_reports_are_byte_identical():
    argv = ["gadget", "doubling", "--random", "200,0.8", "--m", "4", "--r", "2", "--seed", "3"]
    assert run(argv)[1] == run(argv)[1]


def test_timing_is_opt_in():
    _, rep = report(["oracle", "--n", "3", "--sizes", "1,1", "--nmax", "4", "--timing"])
    assert isinstance(rep["elapsed_ms"], float)


def test_out_file_and_console_script(tmp_path):
    out = tmp_path / "r.json"
    assert main(["oracle", "--n", "3", "--sizes", "1,1", "--nmax", "4", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["R"] == 3
    proc = subprocess.run(
        [sys.executable, "-m", "cyclegood", "oracle", "--n", "3", "--sizes", "1,1", "--nmax", "4"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["R"] == 3
