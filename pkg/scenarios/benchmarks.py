# Yerleşik test senaryoları: başlangıç verileri, batimetriler ve tam çözümler

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from core.grid import BoundaryKind, BoundarySpec, Geometry, Grid, GridConfig, StateField, fill_ghosts
from core.physics import GRAVITY
from exceptions.errors import ScenarioError
from fileio.raster import RasterConfig, depth_function, read_raster
from scenarios.sampling import cell_average

logger = logging.getLogger(__name__)

# İç hücre ortalamaları (a, m1, m2, bottom), küresel gridlerde σ ağırlıklı
Fields = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


@dataclass
class InitContext:
    """Başlatıcının ihtiyaç duyabileceği çalıştırma düzeyindeki girdiler"""
    g: float = GRAVITY
    npoints: int = 3
    seed: Optional[int] = None
    raster: Optional[RasterConfig] = None


Initializer = Callable[[Grid, Dict[str, Any], InitContext], Fields]
ExactSolution = Callable[[Grid, Dict[str, Any], InitContext, float], Fields]


@dataclass
class Scenario:
    """
    İsimlendirilmiş test senaryosu

    Args:
        name: Kayıt adı
        grid: Varsayılan grid bölümü
        bc: Varsayılan sınır koşulları
        params: Override sonrası senaryo parametreleri
        initializer: Başlangıç hücre ortalamalarını oluşturur
        exact: Varsa t anındaki tam çözüm
        gauges: Çıktı birimlerinde varsayılan ölçer konumları
        end_time: Varsayılan bitiş zamanı
    """
    name: str
    grid: GridConfig
    bc: BoundarySpec
    params: Dict[str, Any]
    initializer: Initializer
    exact: Optional[ExactSolution] = None
    gauges: Tuple[Tuple[float, float], ...] = ()
    end_time: float = 1.0

    @property
    def has_exact(self) -> bool:
        return self.exact is not None

    def initial_state(self, grid: Grid, bc: BoundarySpec, ctx: Optional[InitContext] = None) -> StateField:
        """Halkası doldurulmuş başlangıç alanı"""
        ctx = ctx or InitContext()
        logger.info("Initialising scenario %s on a %dx%d grid", self.name, grid.nx, grid.ny)
        return _assemble(grid, bc, self.initializer(grid, self.params, ctx))

    def exact_state(self, grid: Grid, bc: BoundarySpec, t: float, ctx: Optional[InitContext] = None) -> StateField:
        """
        t anındaki tam hücre ortalamaları

        Raises:
            ScenarioError: Senaryonun tam çözümü yok
        """
        if self.exact is None:
            raise ScenarioError(self.name, f"Scenario {self.name} has no exact solution")
        return _assemble(grid, bc, self.exact(grid, self.params, ctx or InitContext(), t))


def _assemble(grid: Grid, bc: BoundarySpec, fields: Fields) -> StateField:
    a, m1, m2, bottom = fields
    state = StateField.zeros(grid)
    inner = state.interior
    inner(state.q[0])[...] = a
    inner(state.q[1])[...] = m1
    inner(state.q[2])[...] = m2
    inner(state.bottom)[...] = bottom
    return fill_ghosts(state, grid, bc)


def _zeros(grid: Grid) -> np.ndarray:
    return np.zeros((grid.nx, grid.ny))


# Düz taban üzerinde durağan girdap

def vortex_fields(grid: Grid, params: Dict[str, Any], ctx: InitContext) -> Fields:
    h0, vbar, alpha, reg = params["h0"], params["vbar"], params["alpha"], params["eps_reg"]
    g = ctx.g

    def envelope(x, y):
        return np.exp(alpha * (1.0 - (x ** 2 + y ** 2)))

    def h(x, y):
        return h0 - vbar ** 2 / (4.0 * alpha * g) * envelope(x, y) ** 2

    def qx(x, y):
        r = np.hypot(x, y)
        return -h(x, y) * vbar * envelope(x, y) * r * y / (r + reg)

    def qy(x, y):
        r = np.hypot(x, y)
        return h(x, y) * vbar * envelope(x, y) * r * x / (r + reg)

    n = ctx.npoints
    return cell_average(h, grid, n), cell_average(qx, grid, n), cell_average(qy, grid, n), _zeros(grid)


def vortex_exact(grid: Grid, params: Dict[str, Any], ctx: InitContext, t: float) -> Fields:
    return vortex_fields(grid, params, ctx)


# Paraboloid havzada düzlemsel salınım

def thacker_omega(params: Mapping[str, Any], g: float = GRAVITY) -> float:
    return math.sqrt(2.0 * g * params["h0"]) / params["a"]


def thacker_depth(params: Mapping[str, Any]) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    h0, a = params["h0"], params["a"]

    def depth(x, y):
        return h0 * (1.0 - (x ** 2 + y ** 2) / a ** 2)

    return depth


def thacker_point(params: Mapping[str, Any], x, y, t: float, g: float = GRAVITY):
    """
    Noktasal tam su yüksekliği ve hız

    Returns:
        (h, u, v)
    """
    h0, a, sig = params["h0"], params["a"], params["sigma"]
    omega = thacker_omega(params, g)
    cy = 1.0 if params.get("thacker_printed") else 2.0
    H = thacker_depth(params)(x, y)
    h = np.maximum(0.0, sig * h0 / a ** 2 * (2.0 * x * math.cos(omega * t) + cy * y * math.sin(omega * t) - sig) + H)
    return h, -sig * omega * math.sin(omega * t), sig * omega * math.cos(omega * t)


def thacker_exact(grid: Grid, params: Dict[str, Any], ctx: InitContext, t: float) -> Fields:
    n = ctx.npoints

    def h(x, y):
        return thacker_point(params, x, y, t, ctx.g)[0]

    _, u, v = thacker_point(params, 0.0, 0.0, t, ctx.g)
    a = cell_average(h, grid, n)
    return a, a * u, a * v, cell_average(thacker_depth(params), grid, n)


def thacker_fields(grid: Grid, params: Dict[str, Any], ctx: InitContext) -> Fields:
    return thacker_exact(grid, params, ctx, 0.0)


# Düzgün ortalama batimetrili küre

def mean_bathymetry(lon_deg, lat_deg) -> np.ndarray:
    """H_m = 2 - cos²(πθ/60)·sin²(πφ/60), açılar derece cinsinden"""
    return 2.0 - np.cos(np.pi * lon_deg / 60.0) ** 2 * np.sin(np.pi * lat_deg / 60.0) ** 2


def _mean_bathymetry_rad(x, y):
    return mean_bathymetry(np.degrees(x), np.degrees(y))


def spherical_rest_fields(grid: Grid, params: Dict[str, Any], ctx: InitContext) -> Fields:
    seed = ctx.seed if ctx.seed is not None else params["seed"]
    rng = np.random.default_rng(seed)
    noise = rng.uniform(0.0, params["noise"], size=(grid.nx, grid.ny))
    sb = StateField.zeros(grid).sigma_bar[grid.halo:grid.halo + grid.ny][None, :]
    bottom = cell_average(_mean_bathymetry_rad, grid, ctx.npoints, sigma_weighted=grid.spherical) + noise * sb
    return bottom.copy(), _zeros(grid), _zeros(grid), bottom


def simple_wave_fields(grid: Grid, params: Dict[str, Any], ctx: InitContext) -> Fields:
    amp, width = params["amplitude"], params["width"]

    def h(x, y):
        lon, lat = np.degrees(x), np.degrees(y)
        return mean_bathymetry(lon, lat) + amp * np.exp(-(lon ** 2 + lat ** 2) / width)

    n = ctx.npoints
    weighted = grid.spherical
    return (cell_average(h, grid, n, weighted), _zeros(grid), _zeros(grid),
            cell_average(_mean_bathymetry_rad, grid, n, weighted))


# Basamak üzerinde durgun göl

def lake_at_rest_fields(grid: Grid, params: Dict[str, Any], ctx: InitContext) -> Fields:
    left, right, step = params["depth_left"], params["depth_right"], params["step_x"]

    def depth(x, y):
        return np.where(x < step, left, right)

    bottom = cell_average(depth, grid, ctx.npoints)
    return bottom.copy(), _zeros(grid), _zeros(grid), bottom


# Raster batimetri

def raster_fields(grid: Grid, params: Dict[str, Any], ctx: InitContext) -> Fields:
    if ctx.raster is None or not ctx.raster.path:
        raise ScenarioError("raster", "raster.path must be set for the raster scenario")
    depth_raw = depth_function(read_raster(ctx.raster.path), ctx.raster)
    eta0, amp, width = params["eta0"], params["amplitude"], params["width"]
    cx, cy = params["center_x"], params["center_y"]
    to_raster = np.degrees if grid.spherical else np.asarray

    def depth(x, y):
        return depth_raw(to_raster(x), to_raster(y))

    def h(x, y):
        X, Y = to_raster(x), to_raster(y)
        eta = eta0 + amp * np.exp(-((X - cx) ** 2 + (Y - cy) ** 2) / width)
        return np.maximum(0.0, eta + depth_raw(X, Y))

    n = ctx.npoints
    weighted = grid.spherical
    return cell_average(h, grid, n, weighted), _zeros(grid), _zeros(grid), cell_average(depth, grid, n, weighted)


# Kayıt

PERIODIC = BoundarySpec()
WALLS = BoundarySpec(BoundaryKind.WALL, BoundaryKind.WALL, BoundaryKind.WALL, BoundaryKind.WALL)
SPHERE_BC = BoundarySpec(BoundaryKind.PERIODIC, BoundaryKind.PERIODIC, BoundaryKind.WALL, BoundaryKind.WALL)

DEFAULT_PARAMS: Dict[str, Dict[str, Any]] = {
    "vortex": {"h0": 2.0, "vbar": 1.0, "alpha": 1.0, "eps_reg": 1e-16},
    "thacker": {"h0": 0.1, "a": 1.0, "sigma": 0.5, "thacker_printed": False},
    "spherical_rest": {"noise": 0.2, "seed": 0},
    "simple_wave": {"amplitude": 0.1, "width": 100.0, "gauge_x": 0.0, "gauge_y": 60.0},
    "lake_at_rest": {"depth_left": 1.0, "depth_right": 0.5, "step_x": 0.5},
    "raster": {"eta0": 0.0, "amplitude": 0.0, "width": 1.0, "center_x": 0.0, "center_y": 0.0},
}


def _vortex(params: Dict[str, Any]) -> Scenario:
    grid = GridConfig(Geometry.CARTESIAN, 100, 100, -5.0, 5.0, -5.0, 5.0)
    return Scenario("vortex", grid, PERIODIC, params, vortex_fields, vortex_exact, end_time=1.0)


def _thacker(params: Dict[str, Any]) -> Scenario:
    grid = GridConfig(Geometry.CARTESIAN, xmin=-2.0, xmax=2.0, ymin=-2.0, ymax=2.0, resolution=0.02)
    period = 2.0 * math.pi / thacker_omega(params)
    return Scenario("thacker", grid, WALLS, params, thacker_fields, thacker_exact,
                    gauges=((0.0, 0.0),), end_time=period)


def _spherical_rest(params: Dict[str, Any]) -> Scenario:
    grid = GridConfig(Geometry.SPHERICAL, xmin=-180.0, xmax=180.0, ymin=-89.5, ymax=89.5,
                      radius=10000.0, resolution=1.0)
    return Scenario("spherical_rest", grid, SPHERE_BC, params, spherical_rest_fields, end_time=120.0)


def _simple_wave(params: Dict[str, Any]) -> Scenario:
    grid = GridConfig(Geometry.SPHERICAL, xmin=-180.0, xmax=180.0, ymin=-89.5, ymax=89.5,
                      radius=10000.0, resolution=0.25)
    gauge = (params["gauge_x"], params["gauge_y"])
    return Scenario("simple_wave", grid, SPHERE_BC, params, simple_wave_fields,
                    gauges=(gauge,), end_time=5000.0)


def _lake_at_rest(params: Dict[str, Any]) -> Scenario:
    return Scenario("lake_at_rest", GridConfig(), WALLS, params, lake_at_rest_fields, end_time=1.0)


def _raster(params: Dict[str, Any]) -> Scenario:
    bc = BoundarySpec(BoundaryKind.OPEN, BoundaryKind.OPEN, BoundaryKind.OPEN, BoundaryKind.OPEN)
    return Scenario("raster", GridConfig(), bc, params, raster_fields, end_time=3600.0)


SCENARIOS: Dict[str, Callable[[Dict[str, Any]], Scenario]] = {
    "vortex": _vortex,
    "thacker": _thacker,
    "spherical_rest": _spherical_rest,
    "simple_wave": _simple_wave,
    "lake_at_rest": _lake_at_rest,
    "raster": _raster,
}


def _coerce(name: str, key: str, default: Any, value: Any) -> Any:
    try:
        if isinstance(default, bool):
            if isinstance(value, str):
                lowered = value.strip().lower()
                if lowered not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(value)
                return lowered in ("true", "1", "yes")
            return bool(value)
        if isinstance(default, int):
            return int(value)
        number = float(value)
        if not math.isfinite(number):
            raise ValueError(value)
        return number
    except (TypeError, ValueError):
        raise ScenarioError(name, f"Parameter {key} expects {type(default).__name__}, got {value!r}")


def list_scenarios() -> Tuple[str, ...]:
    return tuple(SCENARIOS)


def get_scenario(name: str, overrides: Optional[Mapping[str, Any]] = None) -> Scenario:
    """
    Kayıtlı bir senaryo oluşturur

    Args:
        name: Senaryo adı
        overrides: Varsayılanların yerine geçen parametre değerleri

    Returns:
        Scenario

    Raises:
        ScenarioError: Bilinmeyen senaryo veya parametre
    """
    key = name.strip().lower()
    if key not in SCENARIOS:
        raise ScenarioError(name, f"Unknown scenario '{name}'. Available: {', '.join(SCENARIOS)}")
    params = dict(DEFAULT_PARAMS[key])
    for param, value in (overrides or {}).items():
        if param not in params:
            raise ScenarioError(name, f"Unknown parameter '{param}' for scenario {key}")
        params[param] = _coerce(key, param, params[param], value)
    return SCENARIOS[key](params)
