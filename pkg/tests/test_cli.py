import subprocess
import sys
from fractions import Fraction

import pytest

from windowgames import fixtures
from windowgames.cli import main
from windowgames.game import parse_game
from windowgames.verifier import format_certificate, parse_certificate


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name in fixtures.NAMES:
        p = tmp_path / f"{name}.game"
        p.write_text(fixtures.game_text(name))
        paths[name] = str(p)
    g = fixtures.five_classes()
    cert = tmp_path / "five.val"
    cert.write_text(format_certificate(g, fixtures.FIVE_CLASS_VALUES))
    paths["cert"] = str(cert)
    bad = tmp_path / "bad.game"
    bad.write_text("game bad\nvertex a rand\nvertex b max\n"
                   "edge a b payoff 0 prob 1/2\nedge a a payoff 0 prob 1/3\nedge b b payoff 0\n")
    paths["bad"] = str(bad)
    paths["dir"] = tmp_path
    return paths


def test_validate(files, capsys):
    assert main(["validate", files["five_classes"]]) == 0
    assert "14 vertices" in capsys.readouterr().out
    assert main(["validate", files["bad"]]) == 2
    err = capsys.readouterr().err
    assert "a" in err and "5/6" in err


def test_missing_file_is_input_error(files, capsys):
    assert main(["validate", str(files["dir"] / "nope.game")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_verify_accepts_and_rejects(files, capsys):
    args = ["verify", files["five_classes"], files["cert"], "--objective", "fwmp", "--window", "2"]
    assert main(args) == 0
    assert capsys.readouterr().out.startswith("verdict accepted")
    g = fixtures.five_classes()
    wrong = files["dir"] / "wrong.val"
    wrong.write_text(format_certificate(g, [Fraction(1)] * 14))
    args[2] = str(wrong)
    assert main(args) == 1
    assert "verdict rejected" in capsys.readouterr().out


def test_verify_flag_errors(files, capsys):
    base = ["verify", files["five_classes"], files["cert"]]
    assert main(base + ["--objective", "fwmp"]) == 2
    assert main(base + ["--objective", "bwmp", "--window", "2"]) == 2
    assert main(base + ["--objective", "fwmp", "--window", "0"]) == 2
    broken = files["dir"] / "broken.val"
    broken.write_text("value v1 one\n")
    assert main(["verify", files["five_classes"], str(broken), "--objective", "fwmp",
                 "--window", "2"]) == 2
    assert "line 1" in capsys.readouterr().err


def test_verify_writes_strategies(files):
    out = files["dir"] / "report.txt"
    assert main(["verify", files["five_classes"], files["cert"], "--objective", "fwmp",
                 "--window", "2", "--strategies", "-o", str(out)]) == 0
    text = out.read_text()
    assert "strategy max" in text and "strategy min" in text


def test_solve_round_trips_through_verify(files, capsys):
    out = files["dir"] / "solved.txt"
    assert main(["solve", files["left_right"], "--objective", "bwmp", "-o", str(out)]) == 0
    g = fixtures.left_right()
    assert parse_certificate(out.read_text(), g) == (-1, 0, 1)
    assert main(["verify", files["left_right"], str(out), "--objective", "bwmp"]) == 0


def test_almost_sure(files, capsys):
    assert main(["almost-sure", files["memory"], "--objective", "fwmp", "--window", "2",
                 "--threshold", "-1/2", "--player", "max"]) == 0
    out = capsys.readouterr().out
    assert "winning v1 v2" in out and "strategy max" in out
    assert main(["almost-sure", files["memory"], "--objective", "fwmp", "--window", "2",
                 "--threshold", "half", "--player", "max"]) == 2


def test_eval_lasso(files, capsys):
    assert main(["eval-lasso", files["memory"], "--lasso", "v1,v2", "--objective", "bwmp"]) == 0
    assert capsys.readouterr().out == "0\n"
    assert main(["eval-lasso", files["memory"], "--lasso", "v1;v2",
                 "--objective", "fwmp", "--window", "3"]) == 0
    assert capsys.readouterr().out == "0\n"
    assert main(["eval-lasso", files["memory"], "--lasso", "v1",
                 "--objective", "bwmp"]) == 2


def test_simulate_is_seeded(files, capsys):
    prof = files["dir"] / "profile.txt"
    assert main(["solve", files["left_right"], "--objective", "fwmp", "--window", "2",
                 "-o", str(prof)]) == 0
    args = ["simulate", files["left_right"], "--profile", str(prof), "--start", "v2",
            "--objective", "fwmp", "--window", "2", "--episodes", "200", "--seed", "7"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert first.startswith("estimate ")
    assert main(args[:4] + ["--start", "v9"] + args[6:]) == 2


def test_export_dot(files, capsys):
    assert main(["export-dot", files["five_classes"], "--classes", files["cert"]]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("digraph")
    assert dot.count("subgraph cluster_") == 5
    assert "shape=box" in dot and "shape=circle" in dot and "shape=diamond" in dot


def test_gen_ssg(files, capsys):
    assert main(["gen-ssg", files["left_right"], "--target", "v3"]) == 0
    game = parse_game(capsys.readouterr().out)
    v3 = game.index["v3"]
    assert game.succ[v3] == (v3,) and game.payoff[v3, v3] == 1
    assert main(["gen-ssg", files["left_right"], "--target", "v7"]) == 2


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "windowgames.cli", "eval-lasso",
                           files["left_right"], "--lasso", "v3", "--objective", "bwmp"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1\n"
