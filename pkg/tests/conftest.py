# Ortak fixture'lar

import numpy as np
import pytest

from core.grid import BoundaryKind, BoundarySpec, Geometry, GridConfig, StateField, build_grid, fill_ghosts
from solver.scheme import SchemeConfig

WALL = BoundaryKind.WALL
OPEN = BoundaryKind.OPEN
PERIODIC = BoundaryKind.PERIODIC


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def periodic_bc():
    return BoundarySpec()


@pytest.fixture
def wall_bc():
    return BoundarySpec(WALL, WALL, WALL, WALL)


@pytest.fixture
def sphere_bc():
    return BoundarySpec(PERIODIC, PERIODIC, WALL, WALL)


@pytest.fixture
def small_grid():
    return build_grid(GridConfig(nx=8, ny=6, xmin=0.0, xmax=1.0, ymin=0.0, ymax=0.75))


@pytest.fixture
def small_sphere(sphere_bc):
    config = GridConfig(Geometry.SPHERICAL, xmin=-180.0, xmax=180.0, ymin=-89.5, ymax=89.5,
                        radius=10000.0, resolution=10.0)
    return build_grid(config, sphere_bc)


@pytest.fixture
def scheme3():
    return SchemeConfig()


def make_state(grid, bc, h, qx=0.0, qy=0.0, bottom=0.0):
    """Verilen iç değerlerle (dizi veya skaler) ve doldurulmuş halkayla alan"""
    state = StateField.zeros(grid)
    inner = state.interior
    inner(state.q[0])[...] = h
    inner(state.q[1])[...] = qx
    inner(state.q[2])[...] = qy
    inner(state.bottom)[...] = bottom
    return fill_ghosts(state, grid, bc)
