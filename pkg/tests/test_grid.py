import math

import numpy as np
import pytest

from core.grid import (
    HALO, BoundarySpec, Geometry, GridConfig, StateField, build_grid, fill_ghosts,
    sigma_cell_average,
)
from core.quadrature import gauss_rule
from exceptions.errors import GridError, ValidationError
from tests.conftest import OPEN, PERIODIC, WALL


class TestConfig:
    def test_resolution_sets_counts(self):
        config = GridConfig(xmin=-2.0, xmax=2.0, ymin=-2.0, ymax=2.0, resolution=0.02)
        assert (config.nx, config.ny) == (200, 200)

    def test_string_geometry(self):
        assert GridConfig(geometry="Spherical", xmax=10, ymax=10).geometry is Geometry.SPHERICAL

    @pytest.mark.parametrize("kwargs", [{"nx": 0}, {"xmin": 1.0, "xmax": 0.0}, {"radius": -1.0},
                                        {"geometry": "torus"}, {"resolution": 0.0},
                                        {"xmax": float("nan")}, {"resolution": float("nan")},
                                        {"ymin": float("-inf")}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            GridConfig(**kwargs)


class TestBoundarySpec:
    def test_strings_coerced(self):
        bc = BoundarySpec("periodic", "periodic", "Wall", "open")
        assert bc.south is WALL and bc.north is OPEN

    def test_unpaired_periodic_rejected(self):
        with pytest.raises(ValidationError):
            BoundarySpec(PERIODIC, WALL, WALL, WALL)

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            BoundarySpec("reflect", "reflect", WALL, WALL)


class TestBuildGrid:
    def test_cartesian_spacing(self, small_grid):
        assert small_grid.dx == pytest.approx(0.125)
        assert small_grid.dy == pytest.approx(0.125)
        assert small_grid.shape == (8 + 2 * HALO, 6 + 2 * HALO)
        assert small_grid.radius == 1.0

    def test_cartesian_ignores_radius(self):
        assert build_grid(GridConfig(radius=5.0)).radius == 1.0

    def test_spherical_in_radians(self, sphere_bc):
        config = GridConfig(Geometry.SPHERICAL, xmin=-180.0, xmax=180.0, ymin=-89.5, ymax=89.5,
                            radius=10000.0, resolution=1.0)
        grid = build_grid(config, sphere_bc)
        assert (grid.nx, grid.ny) == (360, 179)
        assert grid.dx == pytest.approx(math.radians(1.0))
        assert grid.radius == 10000.0

    def test_pole_halo_needs_wall(self):
        config = GridConfig(Geometry.SPHERICAL, xmin=-180.0, xmax=180.0, ymin=-89.5, ymax=89.5, resolution=1.0)
        with pytest.raises(GridError):
            build_grid(config)
        with pytest.raises(GridError):
            build_grid(config, BoundarySpec(PERIODIC, PERIODIC, OPEN, OPEN))

    def test_domain_touching_pole(self):
        config = GridConfig(Geometry.SPHERICAL, xmin=0.0, xmax=10.0, ymin=0.0, ymax=90.0, nx=10, ny=10)
        with pytest.raises(GridError):
            build_grid(config, BoundarySpec(WALL, WALL, WALL, WALL))

    def test_to_output_degrees(self, small_sphere):
        assert small_sphere.to_output(np.array([math.pi])) == pytest.approx([180.0])


class TestSigmaAverage:
    def test_cartesian_is_one(self, small_grid):
        assert sigma_cell_average(small_grid, 3) == 1.0
        assert np.all(StateField.zeros(small_grid).sigma_bar == 1.0)

    def test_exact_average(self, small_sphere):
        j = 4
        bottom = small_sphere.y0 + j * small_sphere.dy
        nodes, weights = gauss_rule(8)
        numeric = np.dot(weights, np.cos(bottom + (nodes + 0.5) * small_sphere.dy))
        assert sigma_cell_average(small_sphere, j) == pytest.approx(numeric, rel=1e-8)

    def test_positive_and_decreasing_away_from_equator(self, small_sphere):
        values = np.array([sigma_cell_average(small_sphere, j) for j in range(small_sphere.ny)])
        assert np.all((values > 0) & (values <= 1))
        centers = np.abs(small_sphere.y_centers())
        order = np.argsort(centers)
        assert np.all(np.diff(values[order]) <= 1e-12)


class TestFillGhosts:
    def _state(self, grid, rng):
        state = StateField.zeros(grid)
        state.interior(state.q)[...] = rng.uniform(0.5, 1.5, (3, grid.nx, grid.ny))
        state.interior(state.bottom)[...] = rng.uniform(0.0, 1.0, (grid.nx, grid.ny))
        return state

    def test_periodic(self, small_grid, periodic_bc, rng):
        state = fill_ghosts(self._state(small_grid, rng), small_grid, periodic_bc)
        g, nx, ny = HALO, small_grid.nx, small_grid.ny
        assert np.array_equal(state.q[:, g - 1, g:g + ny], state.q[:, g + nx - 1, g:g + ny])
        assert np.array_equal(state.q[:, g + nx + 1, g:g + ny], state.q[:, g + 1, g:g + ny])
        assert np.array_equal(state.bottom[g:g + nx, 0], state.bottom[g:g + nx, ny])

    def test_wall_negates_normal_momentum(self, small_grid, wall_bc, rng):
        state = fill_ghosts(self._state(small_grid, rng), small_grid, wall_bc)
        g, ny = HALO, small_grid.ny
        inner = slice(g, g + ny)
        assert np.array_equal(state.q[0, g - 1, inner], state.q[0, g, inner])
        assert np.array_equal(state.q[1, g - 2, inner], -state.q[1, g + 1, inner])
        assert np.array_equal(state.q[2, g - 1, inner], state.q[2, g, inner])
        assert np.array_equal(state.q[2, g:-g, g + ny], -state.q[2, g:-g, g + ny - 1])
        assert np.array_equal(state.bottom[g - 1, inner], state.bottom[g, inner])

    def test_open_copies_edge_cell(self, small_grid, rng):
        bc = BoundarySpec(OPEN, OPEN, OPEN, OPEN)
        state = fill_ghosts(self._state(small_grid, rng), small_grid, bc)
        g, nx = HALO, small_grid.nx
        assert np.array_equal(state.q[:, g + nx + 1, g:-g], state.q[:, g + nx - 1, g:-g])
        assert np.array_equal(state.q[:, g:-g, 0], state.q[:, g:-g, g])

    def test_sigma_bar_mirrors_at_polar_wall(self, small_sphere, sphere_bc):
        state = fill_ghosts(StateField.zeros(small_sphere), small_sphere, sphere_bc)
        g, ny = HALO, small_sphere.ny
        assert state.sigma_bar[g + ny] == state.sigma_bar[g + ny - 1]
        assert state.sigma_bar[g - 2] == state.sigma_bar[g + 1]
        assert np.all(state.sigma_bar > 0)

    def test_shape_mismatch(self, small_grid, periodic_bc):
        other = build_grid(GridConfig(nx=4, ny=4))
        with pytest.raises(ValidationError):
            fill_ghosts(StateField.zeros(other), small_grid, periodic_bc)

    def test_total_volume(self, small_grid, periodic_bc):
        state = fill_ghosts(StateField.zeros(small_grid), small_grid, periodic_bc)
        state.interior(state.q[0])[...] = 2.0
        assert state.total_volume(small_grid) == pytest.approx(2.0 * 0.75)
