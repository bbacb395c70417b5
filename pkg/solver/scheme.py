# Yarı-ayrık dengeli operatör: rekonstrüksiyon, kenar dalgalanmaları, hacim terimleri

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from core.grid import BoundaryKind, BoundarySpec, Geometry, Grid, StateField
from core.physics import (
    desingularise, desingularised_velocity, edge_geometry, flux_normal, geometric_source,
    pressure_vector, rotate, unrotate,
)
from core.quadrature import gauss_rule, tensor_rule
from core.reconstruction import (
    STENCIL_OFFSETS, CwenoParams, EpsLaw, Poly, StencilData, Variant,
    evaluate_local, fit_p2_central, fit_p3_central, gradient_local,
    limiter_theta, reconstruct_cell,
)
from core.riemann import RiemannInput, hllc_fluctuation
from exceptions.errors import TimeStepError, ValidationError
from solver.parallel import BlockExecutor

logger = logging.getLogger(__name__)

# Toplama sırasına göre kenarlar ve dışa doğru normalleri
SIDES: Tuple[str, ...] = ("W", "E", "S", "N")
NORMALS: Dict[str, Tuple[int, int]] = {"W": (-1, 0), "E": (1, 0), "S": (0, -1), "N": (0, 1)}


@dataclass
class SchemeConfig:
    """Çalıştırma yapılandırmasının şema bölümü"""
    variant: Variant = Variant.P2P1
    cfl: float = 0.5
    g: float = 9.81
    d0: float = 0.75
    dr: float = 0.0625
    eps_law: EpsLaw = EpsLaw.H2
    eps_value: float = 1e-6
    h_dry: float = 1e-8
    vel_eps: float = 1e-4
    h_vel: float = 1e-6
    quad_edge: Optional[int] = None
    quad_vol: Optional[int] = None
    end_time: float = 1.0
    max_steps: int = 10_000_000
    threads: int = 0

    def __post_init__(self):
        if not isinstance(self.variant, Variant):
            try:
                self.variant = Variant(str(self.variant).upper())
            except ValueError:
                raise ValidationError("variant", f"Unknown variant: {self.variant}")
        if not isinstance(self.eps_law, EpsLaw):
            try:
                self.eps_law = EpsLaw(str(self.eps_law).lower())
            except ValueError:
                raise ValidationError("eps_law", f"Unknown epsilon law: {self.eps_law}")
        if not 0.0 < self.cfl <= 1.0:
            raise ValidationError("cfl", f"cfl must lie in (0,1], got {self.cfl}")
        if self.g <= 0:
            raise ValidationError("g", "Gravity must be positive")
        if not self.vel_eps > 0:
            raise ValidationError("vel_eps", f"vel_eps must be positive, got {self.vel_eps}")
        if not self.h_vel >= 0:
            raise ValidationError("h_vel", f"h_vel must be non-negative, got {self.h_vel}")
        default_points = 2 if self.variant.order == 3 else 3
        if self.quad_edge is None:
            self.quad_edge = default_points
        if self.quad_vol is None:
            self.quad_vol = default_points
        for key in ("quad_edge", "quad_vol"):
            if getattr(self, key) not in (2, 3):
                raise ValidationError(key, f"{key} must be 2 or 3, got {getattr(self, key)}")
        if self.end_time < 0:
            raise ValidationError("end_time", "End time must be non-negative")
        if self.max_steps < 1:
            raise ValidationError("max_steps", "max_steps must be positive")
        if self.threads < 0:
            raise ValidationError("threads", "Thread count must be non-negative")
        self.cweno_params()

    @property
    def order(self) -> int:
        return self.variant.order

    @property
    def velocity_floor(self) -> float:
        """Altında momentumların sıfırlandığı su sütunu"""
        return max(self.h_vel, self.h_dry)

    def cweno_params(self) -> CwenoParams:
        return CwenoParams(self.variant, self.d0, self.dr, self.eps_law, self.eps_value, self.h_dry)


@dataclass
class CellReconstruction:
    """
    İç hücrelerden oluşan bir sütun bloğunun sınırlandırılmış rekonstrüksiyonları

    Bir noktadaki su sütunu η̄σ + p_f + p_H olduğundan, sütun pozitif olan
    her yerde yüzey ve su sütunu izleri uyuşur.
    """
    q1: Poly
    q2: Poly
    f: Poly
    bottom: Poly
    eta_bar: np.ndarray
    h_bar: np.ndarray
    theta: np.ndarray
    wet: np.ndarray

    def water(self, X, Y, sigma) -> np.ndarray:
        """Yerel ofsetlerde negatif olmayan su sütunu; kuru hücreler düz kalır"""
        a = self.eta_bar * sigma + evaluate_local(self.f, X, Y) + evaluate_local(self.bottom, X, Y)
        return np.maximum(np.where(self.wet, a, self.h_bar), 0.0)

    def surface(self, X, Y, sigma) -> np.ndarray:
        return self.eta_bar * sigma + evaluate_local(self.f, X, Y)


@dataclass(frozen=True)
class QuadraturePoints:
    """Bir hücrenin kenar ve hacim düğümlerinin yerel koordinatları"""
    edge_nodes: np.ndarray
    edge_weights: np.ndarray
    vol_x: np.ndarray
    vol_y: np.ndarray
    vol_weights: np.ndarray
    local: Dict[str, Tuple[np.ndarray, np.ndarray]]

    def all_points(self) -> Tuple[np.ndarray, np.ndarray]:
        xs = [self.local[s][0] for s in SIDES] + [self.vol_x]
        ys = [self.local[s][1] for s in SIDES] + [self.vol_y]
        return np.concatenate(xs), np.concatenate(ys)


@lru_cache(maxsize=32)
def quadrature_points(dx: float, dy: float, quad_edge: int, quad_vol: int) -> QuadraturePoints:
    nodes, weights = gauss_rule(quad_edge)
    vx, vy, vw = tensor_rule(quad_vol)
    half = np.full_like(nodes, 0.5)
    local = {
        "W": (-half * dx, nodes * dy),
        "E": (half * dx, nodes * dy),
        "S": (nodes * dx, -half * dy),
        "N": (nodes * dx, half * dy),
    }
    return QuadraturePoints(nodes, weights, vx * dx, vy * dy, vw, local)


def _stencil(arr: np.ndarray, i0: int, i1: int, ny: int, g: int) -> np.ndarray:
    return np.stack([arr[g + di + i0:g + di + i1, g + dj:g + dj + ny] for di, dj in STENCIL_OFFSETS])


def _block_fluctuations(state: StateField, grid: Grid, i0: int, i1: int) -> Tuple[np.ndarray, np.ndarray]:
    g = grid.halo
    sb = state.sigma_bar
    eta_s = state.eta_sigma
    eta_bar = eta_s[g + i0:g + i1, g:g + grid.ny] / sb[None, g:g + grid.ny]
    f = np.stack([
        eta_s[g + di + i0:g + di + i1, g + dj:g + dj + grid.ny] - eta_bar * sb[None, g + dj:g + dj + grid.ny]
        for di, dj in STENCIL_OFFSETS
    ])
    return f, eta_bar


def fluctuation_data(state: StateField, grid: Grid, i: int, j: int) -> np.ndarray:
    """
    (i, j) hücresinin şablonunda f_j = η_σ,j - η̄_i σ̄_j sapmalarını hesaplar

    Args:
        state: Hayalet hücreleri doldurulmuş alan
        grid: Grid
        i, j: İç hücre indeksleri

    Returns:
        Şablon sırasıyla 13 değer
    """
    if not (0 <= i < grid.nx and 0 <= j < grid.ny):
        raise ValidationError("i", f"Cell ({i}, {j}) outside the grid")
    f, _ = _block_fluctuations(state, grid, i, i + 1)
    return f[:, 0, j]


def _row_sigma(grid: Grid, offsets: np.ndarray) -> np.ndarray:
    # Her iç satır için yerel y ofsetlerinde σ: (npts, 1, ny)
    y = grid.y_centers()[None, None, :] + offsets[:, None, None]
    return grid.sigma(y)


def _surface_theta(base: np.ndarray, fv: np.ndarray, threshold: np.ndarray) -> np.ndarray:
    # Tabanı (η̄σ + H) zaten eşiğin altında olan noktalar θ değerini kısıtlamaz
    values = np.where(base >= threshold, base + fv, threshold)
    return limiter_theta(base, values, threshold)


def reconstruct_block(state: StateField, grid: Grid, cfg: SchemeConfig, i0: int, i1: int) -> CellReconstruction:
    """[i0, i1) iç sütunlarını yeniden kurar"""
    params = cfg.cweno_params()
    g, ny = grid.halo, grid.ny
    sb = state.sigma_bar
    wet_all = state.q[0] >= cfg.h_dry * sb[None, :]
    wet = _stencil(wet_all, i0, i1, ny, g)

    def component(arr: np.ndarray) -> Poly:
        return reconstruct_cell(StencilData(_stencil(arr, i0, i1, ny, g), wet, grid.dx, grid.dy), params)

    p_q1 = component(state.q[1])
    p_q2 = component(state.q[2])
    f, eta_bar = _block_fluctuations(state, grid, i0, i1)
    p_f = reconstruct_cell(StencilData(f, wet, grid.dx, grid.dy), params)
    fit = fit_p2_central if cfg.order == 3 else fit_p3_central
    p_b = fit(StencilData(_stencil(state.bottom, i0, i1, ny, g), dx=grid.dx, dy=grid.dy))
    h_bar = state.q[0][g + i0:g + i1, g:g + ny].copy()

    pts = quadrature_points(grid.dx, grid.dy, cfg.quad_edge, cfg.quad_vol)
    X, Y = pts.all_points()
    Xb, Yb = X[:, None, None], Y[:, None, None]
    sigma = _row_sigma(grid, Y)
    base = eta_bar * sigma + evaluate_local(p_b, Xb, Yb)
    theta = _surface_theta(base, evaluate_local(p_f, Xb, Yb), cfg.h_dry * sigma)
    theta = np.where(wet[0], theta, 1.0)
    if np.any(theta < 1.0):
        p_q1, p_q2, p_f = (p.scaled(theta) for p in (p_q1, p_q2, p_f))
    return CellReconstruction(p_q1, p_q2, p_f, p_b, eta_bar, h_bar, theta, wet[0])


def reconstruct_all(state: StateField, grid: Grid, cfg: SchemeConfig) -> CellReconstruction:
    """
    Tüm iç hücreleri yeniden kurar

    Args:
        state: Hayalet hücreleri doldurulmuş alan
        grid: Grid
        cfg: Şema yapılandırması

    Returns:
        (nx, ny) üzerinde toplu rekonstrüksiyonlar
    """
    return reconstruct_block(state, grid, cfg, 0, grid.nx)


def _point_state(rec: CellReconstruction, Xb, Yb, sigma, cfg: SchemeConfig) -> np.ndarray:
    # Düzenlenmiş hızlardan yeniden kurulan su sütunu ve momentumlar
    a = rec.water(Xb, Yb, sigma)
    m1 = evaluate_local(rec.q1, Xb, Yb)
    m2 = evaluate_local(rec.q2, Xb, Yb)
    w = np.stack(np.broadcast_arrays(a, m1, m2))
    return desingularise(w, cfg.vel_eps * sigma, cfg.velocity_floor * sigma)


def _traces(rec: CellReconstruction, grid: Grid, cfg: SchemeConfig) -> Dict[str, np.ndarray]:
    # Her kenar düğümünde (a, m1, m2, η_σ): (4, ne, bx, ny)
    pts = quadrature_points(grid.dx, grid.dy, cfg.quad_edge, cfg.quad_vol)
    out = {}
    for side in SIDES:
        X, Y = pts.local[side]
        Xb, Yb = X[:, None, None], Y[:, None, None]
        sigma = _row_sigma(grid, Y)
        w = _point_state(rec, Xb, Yb, sigma, cfg)
        eta = rec.surface(Xb, Yb, sigma)
        out[side] = np.stack(np.broadcast_arrays(w[0], w[1], w[2], eta))
    return out


def _mirror(trace: np.ndarray, comp: int) -> np.ndarray:
    out = trace.copy()
    out[comp] = -out[comp]
    return out


def _neighbour_traces(tr: Dict[str, np.ndarray], bc: BoundarySpec) -> Dict[str, np.ndarray]:
    """Her kenarın karşı tarafındaki iz, sınır kuralları uygulanmış"""
    nb = {}
    # x yönü, hücreler (4, ne, nx, ny) dizisinin 2. ekseninde
    west = np.empty_like(tr["W"])
    west[:, :, 1:] = tr["E"][:, :, :-1]
    east = np.empty_like(tr["E"])
    east[:, :, :-1] = tr["W"][:, :, 1:]
    if bc.west is BoundaryKind.PERIODIC:
        west[:, :, 0] = tr["E"][:, :, -1]
        east[:, :, -1] = tr["W"][:, :, 0]
    else:
        west[:, :, 0] = _mirror(tr["W"][:, :, 0], 1) if bc.west is BoundaryKind.WALL else tr["W"][:, :, 0]
        east[:, :, -1] = _mirror(tr["E"][:, :, -1], 1) if bc.east is BoundaryKind.WALL else tr["E"][:, :, -1]

    south = np.empty_like(tr["S"])
    south[..., 1:] = tr["N"][..., :-1]
    north = np.empty_like(tr["N"])
    north[..., :-1] = tr["S"][..., 1:]
    if bc.south is BoundaryKind.PERIODIC:
        south[..., 0] = tr["N"][..., -1]
        north[..., -1] = tr["S"][..., 0]
    else:
        south[..., 0] = _mirror(tr["S"][..., 0], 2) if bc.south is BoundaryKind.WALL else tr["S"][..., 0]
        north[..., -1] = _mirror(tr["N"][..., -1], 2) if bc.north is BoundaryKind.WALL else tr["N"][..., -1]
    nb.update(W=west, E=east, S=south, N=north)
    return nb


def _edge_term(side: str, own: np.ndarray, other: np.ndarray, grid: Grid, cfg: SchemeConfig) -> np.ndarray:
    # Kenar boyunca ∫ F_n(W⁻) + δ R⁻¹ D⁻, hücre ölçüsüne bölünmüş
    pts = quadrature_points(grid.dx, grid.dy, cfg.quad_edge, cfg.quad_vol)
    normal = NORMALS[side]
    sigma = _row_sigma(grid, pts.local[side][1])
    geom = edge_geometry(grid.geometry, normal, sigma)
    threshold = cfg.h_dry * sigma
    eps = cfg.vel_eps * sigma

    w_own, w_other = own[:3], other[:3]
    flux = flux_normal(w_own, sigma, normal, h_dry=threshold, eps=eps)
    inp = RiemannInput(rotate(w_own, geom.nu), rotate(w_other, geom.nu), own[3], other[3],
                       g_eff=cfg.g / sigma, h_dry=threshold, vel_eps=eps)
    fluct = hllc_fluctuation(inp)
    integrand = flux + geom.delta * unrotate(fluct.dminus, geom.nu)
    integral = np.einsum("l,cl...->c...", pts.edge_weights, integrand)
    length_ratio = 1.0 / grid.dx if normal[0] else 1.0 / grid.dy
    return integral * length_ratio


def _volume_term(rec: CellReconstruction, grid: Grid, cfg: SchemeConfig) -> np.ndarray:
    pts = quadrature_points(grid.dx, grid.dy, cfg.quad_edge, cfg.quad_vol)
    Xb, Yb = pts.vol_x[:, None, None], pts.vol_y[:, None, None]
    sigma = _row_sigma(grid, pts.vol_y)
    w = _point_state(rec, Xb, Yb, sigma, cfg)
    ph = w[0]
    fx, fy = gradient_local(rec.f, Xb, Yb)
    integrand = (pressure_vector(ph, sigma, 0, grid.geometry, cfg.g) * fx
                 + pressure_vector(ph, sigma, 1, grid.geometry, cfg.g) * fy)
    if grid.geometry is Geometry.SPHERICAL:
        fv = evaluate_local(rec.f, Xb, Yb)
        y = grid.y_centers()[None, None, :] + Yb
        source = geometric_source(w, sigma, fv, cfg.g, cfg.h_dry * sigma, cfg.vel_eps * sigma)
        integrand = integrand + source * grid.dsigma(y)
    return np.einsum("g,cg...->c...", pts.vol_weights, integrand)


class SemidiscreteOperator:
    """Sabit grid üzerinde yarı-ayrık şemanın sağ tarafı L(u)"""

    def __init__(self, grid: Grid, bc: BoundarySpec, cfg: SchemeConfig,
                 executor: Optional[BlockExecutor] = None):
        self.grid = grid
        self.bc = bc
        self.cfg = cfg
        self._owns_executor = executor is None
        self.executor = executor or BlockExecutor(cfg.threads)

    def __call__(self, state: StateField) -> np.ndarray:
        return semidiscrete_rhs(state, self.grid, self.bc, self.cfg, self.executor)

    def close(self) -> None:
        """Executor bu operatör tarafından oluşturulduysa kapatır"""
        if self._owns_executor:
            self.executor.shutdown()

    def __enter__(self) -> "SemidiscreteOperator":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.close()


def semidiscrete_rhs(state: StateField, grid: Grid, bc: BoundarySpec, cfg: SchemeConfig,
                     executor: Optional[BlockExecutor] = None) -> np.ndarray:
    """
    İç hücre ortalamalarının değişim hızlarını hesaplar

    Args:
        state: Hayalet hücreleri doldurulmuş alan
        grid: Grid
        bc: Sınır koşulları (alan sınırındaki kenar izleri)
        cfg: Şema yapılandırması
        executor: Sütun bloğu executor; verilmezse geçici bir tane kullanılıp kapatılır

    Returns:
        (3, nx, ny) hızlar
    """
    if executor is None:
        with BlockExecutor(cfg.threads) as owned:
            return semidiscrete_rhs(state, grid, bc, cfg, owned)
    nx, ny = grid.nx, grid.ny
    ne = cfg.quad_edge
    recs: Dict[Tuple[int, int], CellReconstruction] = {}
    traces = {side: np.empty((4, ne, nx, ny)) for side in SIDES}

    def build(i0: int, i1: int) -> None:
        rec = reconstruct_block(state, grid, cfg, i0, i1)
        recs[(i0, i1)] = rec
        for side, tr in _traces(rec, grid, cfg).items():
            traces[side][:, :, i0:i1] = tr

    executor.run(build, nx, ny)
    neighbours = _neighbour_traces(traces, bc)
    rate = np.empty((3, nx, ny))

    def assemble(i0: int, i1: int) -> None:
        total = np.zeros((3, i1 - i0, ny))
        for side in SIDES:
            total += _edge_term(side, traces[side][:, :, i0:i1], neighbours[side][:, :, i0:i1], grid, cfg)
        total += _volume_term(recs[(i0, i1)], grid, cfg)
        rate[:, i0:i1] = -total / grid.radius

    executor.run(assemble, nx, ny)
    return rate


def stable_dt(state: StateField, grid: Grid, cfg: SchemeConfig) -> float:
    """
    Islak iç hücreler üzerinden CFL zaman adımını hesaplar

    Raises:
        TimeStepError: Islak hücre yok
    """
    g = grid.halo
    sb = state.sigma_bar[g:g + grid.ny][None, :]
    a = state.water
    h = a / sb
    wet = h >= cfg.h_dry
    if not np.any(wet):
        raise TimeStepError("Cannot compute a time step: every cell is dry")
    eps = cfg.vel_eps * sb
    u1 = np.where(wet, np.abs(desingularised_velocity(a, state.momenta[0], eps)), 0.0)
    u2 = np.where(wet, np.abs(desingularised_velocity(a, state.momenta[1], eps)), 0.0)
    c = np.sqrt(cfg.g * np.where(wet, h, 0.0))
    cos_row = grid.sigma(grid.y_centers())[None, :]
    denom = (u1 + c) * grid.dy + (u2 + c) * grid.dx
    with np.errstate(divide="ignore"):
        dt_cell = np.where(wet, grid.radius * grid.dx * grid.dy * cos_row / denom, np.inf)
    return float(cfg.cfl * dt_cell.min())
