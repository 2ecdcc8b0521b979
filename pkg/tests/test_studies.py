import csv

import numpy as np
import pytest

from bectools.groundstate.config import config_from_dict
from bectools.groundstate.errors import ConfigError
from bectools.groundstate.studies import (
    DAGGER,
    compare_init,
    convergence_study,
    solve_config,
)

from oracles import fd_matrix


def linear_line(**solver):
    return config_from_dict(
        {
            "domain": {"bounds": [[-8, 8]]},
            "grid": {"n": 32},
            "problem": {"flavor": "fd", "beta": 0.0},
            "init": {"kind": "a"},
            "solver": {"eps0": 1e-10, "probe_dirs": 5, **solver},
            "seed": 11,
        }
    )


def case_one(flavor, **solver):
    return config_from_dict(
        {
            "domain": {"bounds": [[-16, 16]]},
            "problem": {"flavor": flavor, "beta": 400.0},
            "init": {"kind": "tf"},
            "solver": {"eps0": 1e-10, "max_iter": 5000, **solver},
        }
    )


def rotating_plane():
    return config_from_dict(
        {
            "domain": {"bounds": [[-6, 6], [-6, 6]]},
            "grid": {"n": 16},
            "problem": {"flavor": "fp", "beta": 10.0, "omega": 0.5},
            "solver": {"max_iter": 40, "probe_dirs": 0},
        }
    )


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


class TestSolveConfig:
    def ground_energy(self, problem):
        return np.linalg.eigvalsh(fd_matrix(32, problem.grid.h[0], problem.v))[0]

    def test_gradient(self):
        config = linear_line()
        problem, report = solve_config(config)
        assert report.method == "gradient"
        assert report.converged
        assert report.energy == pytest.approx(self.ground_energy(problem), abs=1e-9)
        assert report.config == config.to_dict()
        assert report.probe["seed"] == 11
        assert report.probe["min_curvature"] >= -1e-8
        assert report.trace == []

    def test_newton(self):
        problem, report = solve_config(linear_line(method="newton"))
        assert report.method == "newton"
        assert report.energy == pytest.approx(self.ground_energy(problem), abs=1e-9)

    def test_trace_from_config(self):
        config = linear_line(max_iter=4).with_overrides(output={"trace": True})
        _, report = solve_config(config)
        assert len(report.trace) == report.iterations + 1

    def test_cascadic(self):
        config = linear_line(method="cascadic", levels=3)
        problem, report = solve_config(config)
        assert problem.grid.n == (32,)
        assert len(report.levels) == 3
        assert [level.state.shape for level in report.levels] == [(7,), (15,), (31,)]
        assert report.state.shape == (31,)
        assert report.energy == pytest.approx(self.ground_energy(problem), abs=1e-8)

    def test_cascadic_needs_halvable_grid(self):
        config = linear_line(method="cascadic", levels=3).with_overrides(grid={"n": 30})
        with pytest.raises(ConfigError) as e:
            solve_config(config)

        assert e.value.field == "grid.n"


class TestCompareInit:
    def test_flags_lowest(self, tmp_path):
        result = compare_init(rotating_plane(), ["a", "b", "bbar"], threads=2)
        assert [row["kind"] for row in result.rows] == ["a", "b", "bbar"]
        flagged = [row for row in result.rows if row["flag"] == DAGGER]
        assert flagged == [result.minimum]
        assert all(result.minimum["energy"] <= row["energy"] for row in result.rows)

        path = tmp_path / "compare.csv"
        result.write_csv(path)
        rows = read_csv(path)
        assert list(rows[0]) == [
            "kind", "energy", "chemical_potential", "iterations", "converged", "flag"
        ]
        assert [row["flag"] for row in rows].count(DAGGER) == 1

    def test_threads_do_not_change_results(self):
        config = rotating_plane()
        serial = compare_init(config, ["a", "bbar"], threads=1)
        parallel = compare_init(config, ["a", "bbar"], threads=2)
        assert [r["energy"] for r in serial.rows] == [r["energy"] for r in parallel.rows]

    def test_single_kind(self):
        result = compare_init(rotating_plane(), ["b"])
        assert result.rows[0]["flag"] == DAGGER

    def test_kinds_from_config(self):
        config = rotating_plane().with_overrides(study={"kinds": ["a"]})
        assert [row["kind"] for row in compare_init(config).rows] == ["a"]

    def test_no_kinds(self):
        with pytest.raises(ConfigError) as e:
            compare_init(rotating_plane())

        assert e.value.field == "study.kinds"


class TestConvergenceStudy:
    def test_finite_difference_second_order(self):
        # h = 1/2, 1/4, 1/8 against a sine pseudospectral reference at h = 1/16
        table = convergence_study(case_one("fd"), [64, 128, 256], 512)
        errors = [row.energy_error for row in table.rows]
        assert errors[0] > errors[1] > errors[2] > 0.0
        for coarse, fine in zip(errors, errors[1:]):
            assert 2.5 <= coarse / fine <= 6.0
        assert table.rows[0].energy_order is None
        assert table.rows[-1].energy_order == pytest.approx(2.0, abs=0.6)
        assert all(row.phi_error < 1e-2 for row in table.rows)

    def test_sine_spectral_accuracy(self):
        table = convergence_study(case_one("sp"), [128], 512)
        (row,) = table.rows
        assert row.h == 0.25
        assert row.energy_error <= 1e-8
        assert table.reference_energy == pytest.approx(21.3601, abs=5e-4)

    def test_reference_mesh_gives_zero_error(self):
        table = convergence_study(case_one("sp", eps0=1e-8), [64], 64)
        (row,) = table.rows
        assert row.phi_error == pytest.approx(0.0, abs=1e-14)
        assert row.energy_error == pytest.approx(0.0, abs=1e-14)

    def test_csv(self, tmp_path):
        config = case_one("fd", eps0=1e-8).with_overrides(threads=2)
        table = convergence_study(config, [32, 64], 128)
        path = tmp_path / "convergence.csv"
        table.write_csv(path)

        rows = read_csv(path)
        assert list(rows[0]) == [
            "n", "h", "phi_error", "energy_error", "mu_error",
            "phi_order", "energy_order", "mu_order",
        ]
        assert [row["n"] for row in rows] == ["32", "64"]
        assert rows[0]["energy_order"] == ""
        assert float(rows[1]["energy_error"]) == table.rows[1].energy_error

    def test_meshes_from_config(self):
        config = case_one("sp", eps0=1e-8).with_overrides(study={"meshes": [32], "reference": 64})
        table = convergence_study(config)
        assert table.reference == (64,)
        assert [row.n for row in table.rows] == [(32,)]

    def test_flags_nonconvergence(self):
        table = convergence_study(case_one("fd", max_iter=2), [32], 64)
        assert not table.rows[0].converged
        assert not table.converged

    def test_converged(self):
        table = convergence_study(case_one("sp", eps0=1e-8), [32], 64)
        assert table.reference_converged
        assert table.converged

    def test_not_nested(self):
        with pytest.raises(ConfigError) as e:
            convergence_study(case_one("fd"), [48], 64)

        assert e.value.field == "study.meshes"

    def test_no_meshes(self):
        with pytest.raises(ConfigError) as e:
            convergence_study(case_one("fd"))

        assert e.value.field == "study.meshes"
