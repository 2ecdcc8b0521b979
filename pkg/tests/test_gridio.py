import logging

import numpy as np
import pytest

from bectools.groundstate.discretization import build_problem
from bectools.groundstate.errors import GridDataError
from bectools.groundstate.grid import Domain, build_grid
from bectools.groundstate.gridio import MAGIC, load_state, read_grid_data, write_grid_data
from bectools.groundstate.potentials import HarmonicPotential


@pytest.fixture
def box():
    return build_grid(Domain(bounds=((-2, 3), (0, 1))), (5, 4))


@pytest.fixture
def torus():
    return build_grid(Domain(bounds=((-4, 4), (-4, 4)), bc="periodic"), 8)


def problem_on(grid, field=None):
    flavor = "fp" if grid.periodic else "fd"
    return build_problem(grid, flavor, HarmonicPotential((1.0,) * grid.dim), 1.0, 0.0, field)


class TestReadWrite:
    def test_real(self, tmp_path, box, rng):
        values = rng.standard_normal(box.shape)
        path = tmp_path / "real.gpegrid"
        write_grid_data(path, box, values)

        data = read_grid_data(path)
        assert data.grid == box
        assert not data.is_complex
        np.testing.assert_array_equal(data.values, values)

    def test_complex(self, tmp_path, torus, rng):
        values = rng.standard_normal(torus.shape) + 1j * rng.standard_normal(torus.shape)
        path = tmp_path / "complex.gpegrid"
        write_grid_data(path, torus, values)

        data = read_grid_data(path)
        assert data.grid == torus
        assert data.is_complex
        np.testing.assert_array_equal(data.values, values)

    def test_layout(self, tmp_path, box):
        path = tmp_path / "layout.gpegrid"
        write_grid_data(path, box, np.arange(12.0).reshape(box.shape))

        raw = path.read_bytes()
        assert raw[:8] == MAGIC
        assert len(raw) == 20 + 24 * 2 + 8 * 12
        np.testing.assert_array_equal(np.frombuffer(raw, "<i8", 2, 20), [5, 4])
        np.testing.assert_array_equal(np.frombuffer(raw, "<f8", 4, 36), [-2, 3, 0, 1])
        # row-major values follow the header
        np.testing.assert_array_equal(np.frombuffer(raw, "<f8", 12, 68), np.arange(12.0))

    def test_shape_mismatch(self, tmp_path, box):
        with pytest.raises(ValueError):
            write_grid_data(tmp_path / "bad.gpegrid", box, np.zeros((3, 4)))


class TestMalformed:
    def write(self, tmp_path, grid):
        path = tmp_path / "state.gpegrid"
        write_grid_data(path, grid, np.ones(grid.shape))
        return path

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "junk.gpegrid"
        path.write_bytes(b"NOTAGRID" + bytes(64))
        with pytest.raises(GridDataError) as e:
            read_grid_data(path)

        assert e.match("not a grid-data file")

    def test_empty(self, tmp_path):
        path = tmp_path / "empty.gpegrid"
        path.write_bytes(b"")
        with pytest.raises(GridDataError):
            read_grid_data(path)

    def test_corrupt_dimension(self, tmp_path, box):
        path = self.write(tmp_path, box)
        raw = bytearray(path.read_bytes())
        raw[8:12] = (7).to_bytes(4, "little")
        path.write_bytes(bytes(raw))
        with pytest.raises(GridDataError) as e:
            read_grid_data(path)

        assert e.match("Corrupt")

    def test_truncated_header(self, tmp_path, box):
        path = self.write(tmp_path, box)
        path.write_bytes(path.read_bytes()[:30])
        with pytest.raises(GridDataError) as e:
            read_grid_data(path)

        assert e.match("Truncated")

    @pytest.mark.parametrize("change", [-8, 8])
    def test_wrong_value_count(self, tmp_path, box, change):
        path = self.write(tmp_path, box)
        raw = path.read_bytes()
        path.write_bytes(raw[:change] if change < 0 else raw + bytes(change))
        with pytest.raises(GridDataError) as e:
            read_grid_data(path)

        assert e.match("expected 12")

    def test_invalid_bounds(self, tmp_path, box):
        path = self.write(tmp_path, box)
        raw = bytearray(path.read_bytes())
        # swap a_1 and b_1
        raw[36:44], raw[44:52] = raw[44:52], raw[36:44]
        path.write_bytes(bytes(raw))
        with pytest.raises(GridDataError):
            read_grid_data(path)

    @pytest.mark.parametrize(
        "bc, count",
        [(0, 1), (1, 7), (1, 1)],
        ids=["single-dirichlet-interval", "odd-periodic", "single-periodic-node"],
    )
    def test_grid_rules(self, tmp_path, bc, count):
        size = count if bc else count - 1
        path = tmp_path / "odd.gpegrid"
        path.write_bytes(
            MAGIC
            + np.array([1, bc, 0], "<u4").tobytes()
            + np.array([count], "<i8").tobytes()
            + np.array([0.0, 1.0], "<f8").tobytes()
            + np.ones(size, "<f8").tobytes()
        )
        with pytest.raises(GridDataError) as e:
            read_grid_data(path)

        assert e.match("Invalid grid")

    def test_is_os_error(self, tmp_path):
        path = tmp_path / "junk.gpegrid"
        path.write_bytes(b"junk")
        with pytest.raises(OSError):
            read_grid_data(path)


class TestLoadState:
    def test_renormalizes(self, tmp_path, box, rng, caplog):
        problem = problem_on(box)
        phi = rng.standard_normal(box.shape)
        path = tmp_path / "state.gpegrid"
        write_grid_data(path, box, 3.0 * phi)

        with caplog.at_level(logging.INFO, logger="bectools.groundstate.gridio"):
            x = load_state(problem, path)

        assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-14)
        np.testing.assert_allclose(x, phi / np.linalg.norm(phi), atol=1e-15)
        assert "Renormalizing" in caplog.text

    def test_normalized_is_quiet(self, tmp_path, box, caplog):
        problem = problem_on(box)
        phi = np.ones(box.shape) / np.sqrt(box.size * box.cell_volume)
        path = tmp_path / "state.gpegrid"
        write_grid_data(path, box, phi)

        with caplog.at_level(logging.INFO, logger="bectools.groundstate.gridio"):
            load_state(problem, path)

        assert "Renormalizing" not in caplog.text

    def test_grid_mismatch(self, tmp_path, box):
        path = tmp_path / "state.gpegrid"
        write_grid_data(path, box, np.ones(box.shape))
        other = build_grid(Domain(bounds=((-2, 3), (0, 1))), (10, 8))
        with pytest.raises(GridDataError) as e:
            load_state(problem_on(other), path)

        assert e.match("does not match")

    def test_real_part_of_complex_file(self, tmp_path, box):
        path = tmp_path / "state.gpegrid"
        write_grid_data(path, box, np.ones(box.shape, dtype=complex))
        x = load_state(problem_on(box), path)
        assert not np.iscomplexobj(x)

    def test_complex_state_for_real_problem(self, tmp_path, box):
        path = tmp_path / "state.gpegrid"
        write_grid_data(path, box, np.full(box.shape, 1.0 + 1.0j))
        with pytest.raises(GridDataError) as e:
            load_state(problem_on(box), path)

        assert e.match("complex state")

    def test_real_file_for_complex_problem(self, tmp_path, torus):
        path = tmp_path / "state.gpegrid"
        write_grid_data(path, torus, np.ones(torus.shape))
        x = load_state(problem_on(torus, "complex"), path)
        assert np.iscomplexobj(x)

    def test_zero_state(self, tmp_path, box):
        path = tmp_path / "state.gpegrid"
        write_grid_data(path, box, np.zeros(box.shape))
        with pytest.raises(GridDataError) as e:
            load_state(problem_on(box), path)

        assert e.match("zero state")
