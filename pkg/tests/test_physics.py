import numpy as np
import pytest

from core.grid import Geometry
from core.physics import (
    GRAVITY, State, axis_index, desingularise, desingularised_velocity, edge_geometry, flux_1d,
    flux_cartesian, flux_normal, flux_spherical, geometric_source, pressure_vector, rotate, unrotate,
    velocities,
)
from exceptions.errors import DryStateError, ValidationError


class TestFluxes:
    def test_cartesian_x(self):
        np.testing.assert_allclose(flux_cartesian([2.0, 4.0, 6.0], "x"), [4.0, 8.0, 12.0])

    def test_cartesian_y(self):
        np.testing.assert_allclose(flux_cartesian([2.0, 4.0, 6.0], 1), [6.0, 12.0, 18.0])

    def test_spherical_theta(self):
        np.testing.assert_allclose(flux_spherical([1.0, 1.0, 2.0], 0.5, "theta"), [2.0, 2.0, 4.0])

    def test_sigma_one_reduces_to_cartesian(self, rng):
        w = np.vstack([rng.uniform(0.5, 2.0, 20), rng.normal(size=(2, 20))])
        for axis in (0, 1):
            np.testing.assert_allclose(flux_spherical(w, 1.0, axis), flux_cartesian(w, axis))

    def test_dry_state_with_momentum(self):
        with pytest.raises(DryStateError):
            flux_cartesian([0.0, 1.0, 0.0], "x")

    def test_dry_state_at_rest(self):
        np.testing.assert_array_equal(flux_cartesian([0.0, 0.0, 0.0], "y"), [0.0, 0.0, 0.0])

    def test_unknown_axis(self):
        with pytest.raises(ValidationError):
            axis_index("z")


class TestPressureAndSource:
    def test_cartesian_pressure(self):
        np.testing.assert_allclose(pressure_vector(2.0, 1.0, "x"), [0.0, 2.0 * GRAVITY, 0.0])

    def test_spherical_pressure_theta(self):
        np.testing.assert_allclose(pressure_vector(1.0, 0.5, "theta", Geometry.SPHERICAL),
                                   [0.0, 4.0 * GRAVITY, 0.0])

    def test_spherical_pressure_phi(self):
        np.testing.assert_allclose(pressure_vector(1.0, 0.5, "phi", Geometry.SPHERICAL),
                                   [0.0, 0.0, 2.0 * GRAVITY])

    def test_source_convective_part(self):
        np.testing.assert_allclose(geometric_source([1.0, 1.0, 1.0], 1.0, 0.0), [0.0, 1.0, -1.0])

    def test_source_surface_part(self):
        np.testing.assert_allclose(geometric_source([1.0, 0.0, 0.0], 0.5, 0.1), [0.0, 0.0, -3.924])

    def test_source_zero_when_dry(self):
        np.testing.assert_array_equal(geometric_source([0.0, 0.0, 0.0], 0.5, 0.3), [0.0, 0.0, 0.0])


class TestGeometry:
    def test_cartesian(self):
        geo = edge_geometry(Geometry.CARTESIAN, (0, -1), 1.0)
        assert geo.delta == 1.0
        assert (geo.nu[0], geo.nu[1]) == (0.0, -1.0)

    def test_spherical_theta(self):
        geo = edge_geometry(Geometry.SPHERICAL, (1, 0), 0.5)
        assert geo.delta == pytest.approx(2.0)
        np.testing.assert_allclose(geo.nu, (1.0, 0.0))

    def test_spherical_phi(self):
        geo = edge_geometry(Geometry.SPHERICAL, (0, 1), np.array([0.2, 0.9]))
        np.testing.assert_allclose(geo.delta, 1.0)
        np.testing.assert_allclose(geo.nu[1], 1.0)

    def test_diagonal_normal_rejected(self):
        with pytest.raises(ValidationError):
            edge_geometry(Geometry.CARTESIAN, (1, 1), 1.0)

    def test_rotate_roundtrip(self, rng):
        w = rng.normal(size=(3, 10))
        nu = (0.6, -0.8)
        np.testing.assert_allclose(unrotate(rotate(w, nu), nu), w)


class TestRotationalInvariance:
    @pytest.mark.parametrize("normal", [(1, 0), (-1, 0), (0, 1), (0, -1)])
    def test_normal_flux(self, rng, normal):
        n = 100_000
        sigma = rng.uniform(0.1, 1.0, n)
        w = np.vstack([rng.uniform(0.1, 3.0, n), rng.normal(size=(2, n))])
        geo = edge_geometry(Geometry.SPHERICAL, normal, sigma)
        lhs = rotate(flux_normal(w, sigma, normal), geo.nu)
        rw = rotate(w, geo.nu)
        rhs = geo.delta * flux_1d(rw)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-13, atol=1e-13 * np.abs(rhs).max())

    @pytest.mark.parametrize("normal", [(1, 0), (0, 1)])
    def test_pressure(self, rng, normal):
        n = 100_000
        sigma = rng.uniform(0.1, 1.0, n)
        a = rng.uniform(0.1, 3.0, n)
        geo = edge_geometry(Geometry.SPHERICAL, normal, sigma)
        axis = 0 if normal[0] else 1
        lhs = rotate(pressure_vector(a, sigma, axis, Geometry.SPHERICAL), geo.nu)
        rhs = geo.delta * pressure_vector(a / sigma, 1.0, 0)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-13, atol=1e-13 * np.abs(rhs).max())


def test_velocities_zero_on_dry():
    u, v = velocities(np.array([[0.0, 2.0], [0.0, 4.0], [0.0, -2.0]]))
    np.testing.assert_array_equal(u, [0.0, 2.0])
    np.testing.assert_array_equal(v, [0.0, -1.0])


def test_state_roundtrip():
    state = State.from_array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(state.to_array(), [1.0, 2.0, 3.0])


class TestDesingularisation:
    def test_deep_columns_unchanged(self, rng):
        a = rng.uniform(1e-3, 2.0, 50)
        m = rng.normal(size=50)
        np.testing.assert_array_equal(desingularised_velocity(a, m, 1e-4), m / a)

    def test_velocity_bounded_near_dry(self):
        a = np.logspace(-12, -4, 40)
        u = desingularised_velocity(a, np.full_like(a, 0.5), 1e-3)
        assert np.all(np.abs(u) <= 0.5 / 1e-3)
        assert np.all(np.abs(0.5 / a) > np.abs(u))

    def test_floor_zeroes_velocity(self):
        u = desingularised_velocity(np.array([1e-7, 1e-5]), np.array([1.0, 1.0]), 1e-4, h_vel=1e-6)
        assert u[0] == 0.0 and u[1] > 0.0

    def test_desingularise_rebuilds_momenta(self):
        w = np.array([[2.0, 1e-5, -1e-9], [0.4, 0.3, 0.2], [-0.1, 0.1, 0.0]])
        out = desingularise(w, 1e-4, 1e-6)
        np.testing.assert_array_equal(out[:, 0], w[:, 0])
        assert 0.0 < out[1, 1] < w[1, 1]
        np.testing.assert_array_equal(out[:, 2], [0.0, 0.0, 0.0])

    def test_non_positive_eps(self):
        with pytest.raises(ValidationError):
            desingularised_velocity(1.0, 1.0, 0.0)

    def test_regularised_flux_stays_finite(self):
        flux = flux_spherical([1e-7, 1e-2, 0.0], 1.0, "x", eps=1e-4)
        assert np.abs(flux[1]) < 1.0
