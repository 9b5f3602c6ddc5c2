from __future__ import annotations

import json
import subprocess
import sys

import pytest

from convexgen.cli import run


@pytest.fixture
def cli(capsys, data_dir):
    def call(*argv):
        argv = [str(data_dir / a) if a.endswith(".json") and "/" not in a else a for a in argv]
        code = run(argv)
        out, err = capsys.readouterr()
        return code, out, err
    return call


def test_solve_structure(cli):
    assert cli("solve", "--method", "structure", "--input", "three_in_line.json")[:2] == \
        (0, "nim = 1\n")


def test_solve_brute_nim6(cli):
    code, out, _ = cli("solve", "--method", "brute", "--input", "nim6_points.json")
    assert code == 0 and out == "nim = 6\n"


def test_solve_all_agree(cli):
    code, out, _ = cli("solve", "--method", "all", "--input", "caterpillar_tree.json", "--json")
    data = json.loads(out)
    assert code == 0 and data["agree"]
    assert data["nim"] == {"brute": 3, "structure": 3, "closed": 3}


def test_solve_all_without_closed_form(cli):
    code, out, _ = cli("solve", "--method", "all", "--input", "nim6_points.json", "--json")
    data = json.loads(out)
    assert code == 0 and "closed" not in data["nim"]
    assert data["notes"]["closed"].startswith("not applicable")


def test_closed_method_not_applicable(cli):
    code, _, err = cli("solve", "--method", "closed", "--input", "nim6_points.json")
    assert code == 2 and "no closed form" in err


def test_winning_override(cli):
    code, out, _ = cli("solve", "--input", "deleted_line.json", "--winning", "1,2")
    assert code == 0 and out == "nim = 2\n"
    code, _, err = cli("solve", "--input", "deleted_line.json", "--winning", "3")
    assert code == 2 and "error" in err


def test_validate(cli):
    code, out, _ = cli("validate", "--input", "broken.json")
    assert code == 2
    assert "[intersection]" in out and "[accessibility]" in out
    code, out, _ = cli("validate", "--input", "broken.json", "--json")
    data = json.loads(out)
    assert not data["valid"] and data["violations"]
    assert cli("validate", "--input", "seven_points.json")[0] == 0


def test_position(cli):
    code, out, _ = cli("position", "--input", "three_in_line.json", "--elements", "-1")
    assert code == 0
    assert "class: X_{-1,0}" in out
    assert "predicted nim: 2" in out
    assert "optimal move: add {1}" in out
    code, out, _ = cli("position", "--input", "three_in_line.json", "--elements=-1,1")
    assert "terminal, nim 0" in out
    code, out, _ = cli("position", "--input", "caterpillar_tree.json", "--json")
    data = json.loads(out)
    assert data["class"] == [0, 1, 2] and data["predicted_nim"] == data["brute_nim"] == 3


def test_diagram_to_stdout_and_directory(cli, tmp_path):
    code, out, _ = cli("diagram", "--dot", "structure", "--input", "three_in_line.json")
    assert code == 0 and out.startswith("digraph structure {")
    code, out, _ = cli("diagram", "--dot", "orbit", "--input", "three_in_line.json",
                       "--out", str(tmp_path))
    assert code == 0
    written = tmp_path / "three_in_line.orbit.dot"
    assert written.read_text().startswith("digraph orbit {")


def test_enumerate(cli):
    code, out, _ = cli("enumerate", "--n", "3", "--empty", "no", "--json")
    data = json.loads(out)
    assert code == 0 and data["count"] == 4
    code, out, _ = cli("enumerate", "--n", "2")
    assert out.splitlines()[0].startswith("4 convex geometries")


def test_cross_validate_and_spectrum(cli, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = cli("cross-validate", "--config", "campaign_trees.json",
                       "--count", "5", "--out", str(out_path))
    assert code == 0 and "0 disagreements" in out
    assert json.loads(out_path.read_text())["instances"] == 5
    code, out, _ = cli("spectrum", "--source", "trees", "--max-size", "5", "--solvers", "structure",
                       "--include", "nim6_points.json", "--json")
    assert code == 0
    assert json.loads(out)["counts"]["6"] == 1
    # an included instance outside the closed forms is skipped, not fatal
    code, out, _ = cli("spectrum", "--source", "trees", "--max-size", "5", "--solvers", "closed",
                       "--include", "nim6_points.json", "--json")
    assert code == 0 and "6" not in json.loads(out)["counts"]


def test_usage_errors(cli):
    assert cli()[0] == 1
    assert cli("solve")[0] == 1
    assert cli("solve", "--method", "magic", "--input", "three_in_line.json")[0] == 1


def test_missing_file(cli, tmp_path):
    assert cli("solve", "--input", str(tmp_path / "nope.json"))[0] == 2


def test_module_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "convexgen", "solve", "--input",
                           str(data_dir / "star_tree.json"), "--method", "closed"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "nim = 3\n"
