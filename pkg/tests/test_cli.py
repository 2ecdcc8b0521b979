import csv
import json

import pytest

from bectools.groundstate import __version__
from bectools.groundstate.cli import EXIT_CONFIG, EXIT_IO, EXIT_NONCONVERGED, EXIT_OK, main
from bectools.groundstate.config import load_config
from bectools.groundstate.initial import initial_state

LINE = """
[domain]
bounds = [[-8, 8]]

[grid]
n = 32

[problem]
flavor = "fd"
beta = 10.0

[init]
kind = "a"

[solver]
probe_dirs = 4
"""

PLANE = """
[domain]
bounds = [[-6, 6], [-6, 6]]

[grid]
n = 16

[problem]
flavor = "fp"
beta = 10.0
omega = 0.5

[solver]
max_iter = 300
probe_dirs = 0
"""


@pytest.fixture
def line_config(tmp_path):
    path = tmp_path / "line.toml"
    path.write_text(LINE, encoding="utf-8")
    return path


def run(*argv):
    return main([str(arg) for arg in argv])


class TestSolve:
    def test_artifacts(self, tmp_path, line_config, capsys):
        out = tmp_path / "out"
        assert run("solve", "--config", line_config, "--out", out, "--trace") == EXIT_OK

        for name in ("report.json", "timing.json", "state.gpegrid", "config.toml", "trace.csv"):
            assert (out / name).is_file()

        report = json.loads((out / "report.json").read_text(encoding="utf-8"))
        assert report["converged"]
        assert report["config"]["output"]["dir"] == str(out)
        assert f"energy              {report['energy']!r}" in capsys.readouterr().out

        with open(out / "trace.csv", encoding="utf-8", newline="") as f:
            records = list(csv.DictReader(f))
        assert len(records) == report["iterations"] + 1
        assert "wall_time" in json.loads((out / "timing.json").read_text(encoding="utf-8"))

    def test_no_trace_by_default(self, tmp_path, line_config):
        out = tmp_path / "out"
        assert run("solve", "--config", line_config, "--out", out) == EXIT_OK
        assert not (out / "trace.csv").exists()

    def test_reports_are_reproducible(self, tmp_path, line_config):
        out = tmp_path / "out"
        run("solve", "--config", line_config, "--out", out, "--seed", 5)
        first = (out / "report.json").read_bytes()
        run("solve", "--config", line_config, "--out", out, "--seed", 5)
        assert (out / "report.json").read_bytes() == first

    def test_config_echo(self, tmp_path, line_config):
        out = tmp_path / "out"
        run("solve", "--config", line_config, "--out", out, "--seed", 5)
        echoed = load_config(out / "config.toml")
        assert echoed == load_config(out / "report.json")
        assert echoed.seed == 5

        again = tmp_path / "again"
        run("solve", "--config", out / "config.toml", "--out", again)
        first = json.loads((out / "report.json").read_text(encoding="utf-8"))
        second = json.loads((again / "report.json").read_text(encoding="utf-8"))
        assert second["energy"] == first["energy"]
        assert second["probe"] == first["probe"]

    def test_state_file_reloads(self, tmp_path, line_config):
        out = tmp_path / "out"
        run("solve", "--config", line_config, "--out", out)
        config = load_config(out / "config.toml")
        problem = config.build_problem(config.build_grid())

        x = initial_state("file", problem, out / "state.gpegrid")
        energy = json.loads((out / "report.json").read_text(encoding="utf-8"))["energy"]
        assert problem.evaluate(x)[0] == pytest.approx(energy, abs=1e-13)

    def test_refine(self, tmp_path, line_config):
        out = tmp_path / "out"
        assert run("refine", "--config", line_config, "--out", out, "--levels", 2) == EXIT_OK
        report = json.loads((out / "report.json").read_text(encoding="utf-8"))
        assert report["method"] == "cascadic-newton"
        assert len(report["levels"]) == 2
        assert report["config"]["solver"]["method"] == "cascadic"


class TestExitCodes:
    def test_nonconvergence(self, tmp_path, line_config, capsys):
        config = tmp_path / "short.toml"
        config.write_text(LINE.replace("probe_dirs = 4", "max_iter = 2"), encoding="utf-8")
        assert run("solve", "--config", config, "--out", tmp_path / "out") == EXIT_NONCONVERGED
        assert "converged           False" in capsys.readouterr().out

    def test_config_error(self, tmp_path, capsys):
        config = tmp_path / "bad.toml"
        config.write_text(LINE + "bogus = 1\n", encoding="utf-8")
        assert run("solve", "--config", config, "--out", tmp_path / "out") == EXIT_CONFIG
        assert "solver.bogus" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        assert run("solve", "--config", tmp_path / "absent.toml") == EXIT_IO

    def test_missing_state_file(self, tmp_path, capsys):
        config = tmp_path / "file.toml"
        text = LINE.replace('kind = "a"', f'kind = "file"\npath = "{tmp_path / "none.gpegrid"}"')
        config.write_text(text, encoding="utf-8")
        assert run("solve", "--config", config, "--out", tmp_path / "out") == EXIT_IO
        assert "I/O error" in capsys.readouterr().err

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["--version"])

        assert e.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_missing_command(self):
        with pytest.raises(SystemExit) as e:
            main([])

        assert e.value.code == 2


class TestStudies:
    def test_compare_init(self, tmp_path, capsys):
        config = tmp_path / "plane.toml"
        config.write_text(PLANE, encoding="utf-8")
        out = tmp_path / "out"
        code = run(
            "compare-init", "--config", config, "--out", out, "--kinds", "a,bbar", "--threads", 2
        )

        with open(out / "compare_init.csv", encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
        assert [row["kind"] for row in rows] == ["a", "bbar"]
        converged = all(row["converged"] == "True" for row in rows)
        assert code == (EXIT_OK if converged else EXIT_NONCONVERGED)
        assert "†" in capsys.readouterr().out

    def test_convergence_study(self, tmp_path, line_config):
        out = tmp_path / "out"
        argv = ["convergence-study", "--config", line_config, "--out", out]
        assert run(*argv, "--meshes", "16,32", "--reference", 64) == EXIT_OK

        with open(out / "convergence.csv", encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
        assert [row["n"] for row in rows] == ["16", "32"]
        assert float(rows[1]["energy_error"]) < float(rows[0]["energy_error"])

    def test_convergence_study_not_converged(self, tmp_path):
        config = tmp_path / "short.toml"
        config.write_text(LINE.replace("probe_dirs = 4", "max_iter = 2"), encoding="utf-8")
        out = tmp_path / "out"
        argv = ["convergence-study", "--config", config, "--out", out]
        assert run(*argv, "--meshes", "16,32", "--reference", 64) == EXIT_NONCONVERGED
        assert (out / "convergence.csv").is_file()

    def test_bad_mesh_list(self, tmp_path, line_config):
        with pytest.raises(SystemExit) as e:
            run("convergence-study", "--config", line_config, "--meshes", "16,x")

        assert e.value.code == 2
