import math

import numpy as np
import pytest

from core.grid import HALO, Geometry, GridConfig, build_grid
from exceptions.errors import ScenarioError, ValidationError
from fileio.raster import RasterConfig, depth_function, parse_raster
from scenarios.benchmarks import (
    DEFAULT_PARAMS, InitContext, get_scenario, list_scenarios, mean_bathymetry, thacker_omega,
    thacker_point,
)
from scenarios.norms import l1_error, observed_rates
from scenarios.sampling import cell_average, locate_cell, surface_at
from tests.conftest import make_state


def _tiny_cell(half=1.5e-4):
    return build_grid(GridConfig(nx=3, ny=3, xmin=-half, xmax=half, ymin=-half, ymax=half))


class TestRegistry:
    def test_all_registered(self):
        assert set(list_scenarios()) == {"vortex", "thacker", "spherical_rest", "simple_wave",
                                         "lake_at_rest", "raster"}

    def test_unknown_scenario(self):
        with pytest.raises(ScenarioError):
            get_scenario("tohoku")

    def test_unknown_parameter(self):
        with pytest.raises(ScenarioError):
            get_scenario("vortex", {"beta": 1.0})

    def test_bad_parameter_type(self):
        with pytest.raises(ScenarioError):
            get_scenario("vortex", {"h0": "deep"})

    @pytest.mark.parametrize("value", ["nan", float("inf")])
    def test_non_finite_parameter(self, value):
        with pytest.raises(ScenarioError):
            get_scenario("thacker", {"a": value})

    def test_overrides_are_coerced(self):
        scenario = get_scenario("Thacker", {"thacker_printed": "yes", "h0": "0.2"})
        assert scenario.params["thacker_printed"] is True
        assert scenario.params["h0"] == 0.2

    def test_defaults_not_mutated(self):
        get_scenario("vortex", {"h0": 3.0})
        assert DEFAULT_PARAMS["vortex"]["h0"] == 2.0

    def test_no_exact_solution(self, small_sphere, sphere_bc):
        with pytest.raises(ScenarioError):
            get_scenario("spherical_rest").exact_state(small_sphere, sphere_bc, 1.0)

    def test_raster_needs_path(self, small_grid, wall_bc):
        with pytest.raises(ScenarioError):
            get_scenario("raster").initial_state(small_grid, wall_bc)


class TestVortex:
    def test_depth_at_origin(self, periodic_bc):
        state = get_scenario("vortex").initial_state(_tiny_cell(), periodic_bc)
        expected = 2.0 - math.e ** 2 / (4.0 * 9.81)
        assert state.water[1, 1] == pytest.approx(expected, abs=1e-7)
        assert expected == pytest.approx(1.811696, abs=1e-6)
        assert abs(state.momenta[0, 1, 1]) < 1e-6

    def test_exact_is_stationary(self, small_grid, periodic_bc):
        scenario = get_scenario("vortex")
        ref = scenario.exact_state(small_grid, periodic_bc, 3.0)
        np.testing.assert_array_equal(ref.q, scenario.initial_state(small_grid, periodic_bc).q)

    def test_default_setup(self):
        scenario = get_scenario("vortex")
        assert scenario.has_exact
        assert (scenario.grid.nx, scenario.grid.xmin) == (100, -5.0)


class TestThacker:
    params = DEFAULT_PARAMS["thacker"]

    def test_omega(self):
        assert thacker_omega(self.params) == pytest.approx(1.400714, abs=1e-6)

    def test_point_values(self):
        h, u, v = thacker_point(self.params, 0.0, 0.0, 0.0)
        assert h == pytest.approx(0.075)
        assert u == pytest.approx(0.0)
        assert v == pytest.approx(0.5 * thacker_omega(self.params))
        dry, _, _ = thacker_point(self.params, 2.0, 0.0, 0.0)
        assert dry == 0.0

    def test_periodic_in_time(self, rng):
        x, y = rng.uniform(-1.0, 1.0, (2, 50))
        period = 2.0 * math.pi / thacker_omega(self.params)
        h0 = thacker_point(self.params, x, y, 0.0)[0]
        h1 = thacker_point(self.params, x, y, period)[0]
        np.testing.assert_allclose(h1, h0, atol=1e-12)

    def test_printed_coefficient_changes_solution(self):
        printed = dict(self.params, thacker_printed=True)
        t = 0.25 * 2.0 * math.pi / thacker_omega(self.params)
        assert thacker_point(printed, 0.0, 0.5, t)[0] != thacker_point(self.params, 0.0, 0.5, t)[0]

    def test_scenario_defaults(self):
        scenario = get_scenario("thacker")
        assert scenario.end_time == pytest.approx(2.0 * math.pi / 1.400714, rel=1e-6)
        assert scenario.gauges == ((0.0, 0.0),)
        assert scenario.bc.west.value == "wall"

    def test_momentum_matches_uniform_velocity(self, small_grid, wall_bc):
        scenario = get_scenario("thacker")
        state = scenario.exact_state(small_grid, wall_bc, 0.3)
        _, u, v = thacker_point(self.params, 0.0, 0.0, 0.3)
        np.testing.assert_allclose(state.momenta[0], u * state.water, atol=1e-15)
        np.testing.assert_allclose(state.momenta[1], v * state.water, atol=1e-15)


class TestSphericalRest:
    def test_mean_bathymetry(self):
        assert mean_bathymetry(15.0, 15.0) == pytest.approx(1.75)
        assert mean_bathymetry(0.0, 0.0) == 2.0

    def test_free_surface_is_flat(self, small_sphere, sphere_bc):
        state = get_scenario("spherical_rest").initial_state(small_sphere, sphere_bc, InitContext(seed=7))
        np.testing.assert_array_equal(state.q[0], state.bottom)
        assert np.all(state.momenta == 0.0)

    def test_seed_reproducible(self, small_sphere, sphere_bc):
        scenario = get_scenario("spherical_rest")
        a = scenario.initial_state(small_sphere, sphere_bc, InitContext(seed=11))
        b = scenario.initial_state(small_sphere, sphere_bc, InitContext(seed=11))
        c = scenario.initial_state(small_sphere, sphere_bc, InitContext(seed=12))
        np.testing.assert_array_equal(a.bottom, b.bottom)
        assert not np.array_equal(a.bottom, c.bottom)

    def test_parameter_seed_used_without_context_seed(self, small_sphere, sphere_bc):
        a = get_scenario("spherical_rest", {"seed": 4}).initial_state(small_sphere, sphere_bc)
        b = get_scenario("spherical_rest").initial_state(small_sphere, sphere_bc, InitContext(seed=4))
        np.testing.assert_array_equal(a.bottom, b.bottom)


class TestSimpleWave:
    def test_hump_at_origin(self, periodic_bc):
        grid = _tiny_cell()
        state = get_scenario("simple_wave").initial_state(grid, periodic_bc)
        assert surface_at(state, grid, (1, 1)) == pytest.approx(0.1, abs=1e-8)

    def test_default_gauge(self):
        scenario = get_scenario("simple_wave", {"gauge_y": 45.0})
        assert scenario.gauges == ((0.0, 45.0),)
        assert scenario.grid.geometry is Geometry.SPHERICAL


def test_lake_at_rest_step(small_grid, wall_bc):
    state = get_scenario("lake_at_rest").initial_state(small_grid, wall_bc)
    np.testing.assert_array_equal(state.q[0], state.bottom)
    assert state.bottom[HALO, HALO] == 1.0
    assert state.bottom[HALO + small_grid.nx - 1, HALO] == 0.5


class TestSampling:
    def test_linear_average_is_center_value(self, small_grid):
        averages = cell_average(lambda x, y: 3.0 * x - y, small_grid, 2)
        expected = 3.0 * small_grid.x_centers()[:, None] - small_grid.y_centers()[None, :]
        np.testing.assert_allclose(averages, expected, atol=1e-14)

    def test_constant_broadcast(self, small_grid):
        np.testing.assert_allclose(cell_average(lambda x, y: 2.0, small_grid), 2.0)

    @pytest.mark.parametrize("npoints", [2, 3])
    def test_constant_is_reproduced_exactly(self, small_grid, npoints):
        averages = cell_average(lambda x, y: 0.1 + 0.0 * x, small_grid, npoints)
        assert (averages == 0.1).all()

    def test_constant_raster_averages_exactly(self, small_grid):
        text = "ncols 4\nnrows 3\nxllcorner -0.5\nyllcorner -0.5\ncellsize 0.75\n" + "3 3 3 3\n" * 3
        depth = depth_function(parse_raster(text), RasterConfig())
        assert (cell_average(depth, small_grid) == 3.0).all()

    def test_locate_cell(self, small_grid, small_sphere):
        assert locate_cell(small_grid, 0.3, 0.3) == (2, 2)
        i, j = locate_cell(small_sphere, 0.0, 0.0)
        assert small_sphere.to_output(small_sphere.x_centers()[i]) == pytest.approx(0.0, abs=10.0)

    def test_locate_outside(self, small_grid):
        with pytest.raises(ValidationError):
            locate_cell(small_grid, 1.5, 0.1)


class TestNorms:
    def test_l1_error(self, small_grid, periodic_bc):
        ref = make_state(small_grid, periodic_bc, 1.0)
        state = ref.copy()
        state.water[1, 1] += 0.5
        assert l1_error(state, ref, small_grid) == pytest.approx(0.5 * 0.125 ** 2)
        assert l1_error(state, ref, small_grid, 1) == 0.0

    def test_l1_bad_component(self, small_grid, periodic_bc):
        ref = make_state(small_grid, periodic_bc, 1.0)
        with pytest.raises(ValidationError):
            l1_error(ref, ref, small_grid, 3)

    def test_l1_shape_mismatch(self, small_grid, periodic_bc):
        other = build_grid(GridConfig(nx=4, ny=4))
        with pytest.raises(ValidationError):
            l1_error(make_state(small_grid, periodic_bc, 1.0), make_state(other, periodic_bc, 1.0), small_grid)

    def test_observed_rates(self):
        rates = observed_rates([1.0, 0.125, 0.0])
        assert rates[0] is None
        assert rates[1] == pytest.approx(3.0)
        assert rates[2] is None
