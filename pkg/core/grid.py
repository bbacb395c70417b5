# Düzgün yapılı grid, hayalet hücre sınır doldurma ve cos-enlem ortalamaları

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from exceptions.errors import GridError, ValidationError

logger = logging.getLogger(__name__)

HALO = 2


class Geometry(Enum):
    """Hesaplama düzleminin koordinat sistemi"""
    CARTESIAN = "cartesian"
    SPHERICAL = "spherical"


class BoundaryKind(Enum):
    """Alanın bir kenarına uygulanan sınır koşulu"""
    PERIODIC = "periodic"
    WALL = "wall"
    OPEN = "open"


@dataclass(frozen=True)
class BoundarySpec:
    """Dört kenardaki sınır koşulları"""
    west: BoundaryKind = BoundaryKind.PERIODIC
    east: BoundaryKind = BoundaryKind.PERIODIC
    south: BoundaryKind = BoundaryKind.PERIODIC
    north: BoundaryKind = BoundaryKind.PERIODIC

    def __post_init__(self):
        for side in ("west", "east", "south", "north"):
            value = getattr(self, side)
            if not isinstance(value, BoundaryKind):
                try:
                    object.__setattr__(self, side, BoundaryKind(str(value).lower()))
                except ValueError:
                    raise ValidationError(side, f"Unknown boundary kind: {value}")
        for a, b in (("west", "east"), ("south", "north")):
            pa = getattr(self, a) is BoundaryKind.PERIODIC
            pb = getattr(self, b) is BoundaryKind.PERIODIC
            if pa != pb:
                raise ValidationError(a, f"Periodic boundary must be set on both {a} and {b}")


@dataclass
class GridConfig:
    """
    Çalıştırma yapılandırmasının grid bölümü

    Küresel sınırlar derece cinsinden verilir.
    """
    geometry: Geometry = Geometry.CARTESIAN
    nx: int = 100
    ny: int = 100
    xmin: float = 0.0
    xmax: float = 1.0
    ymin: float = 0.0
    ymax: float = 1.0
    radius: float = 1.0
    resolution: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.geometry, Geometry):
            try:
                self.geometry = Geometry(str(self.geometry).lower())
            except ValueError:
                raise ValidationError("geometry", f"Unknown geometry: {self.geometry}")
        for key in ("xmin", "xmax", "ymin", "ymax", "radius", "resolution"):
            value = getattr(self, key)
            if value is not None and not math.isfinite(value):
                raise ValidationError(key, f"{key} must be finite, got {value}")
        if self.resolution is not None:
            if self.resolution <= 0:
                raise ValidationError("resolution", "Resolution must be positive")
            self.nx = int(round((self.xmax - self.xmin) / self.resolution))
            self.ny = int(round((self.ymax - self.ymin) / self.resolution))
        if self.nx < 1 or self.ny < 1:
            raise ValidationError("nx", f"Cell counts must be positive, got {self.nx}x{self.ny}")
        if self.xmax <= self.xmin or self.ymax <= self.ymin:
            raise ValidationError("xmax", "Domain extents must be increasing")
        if self.radius <= 0:
            raise ValidationError("radius", "Radius must be positive")


@dataclass(frozen=True)
class Grid:
    """
    İki hücrelik hayalet halkası olan düzgün grid

    Küresel gridler boylam/enlemi radyan olarak tutar (x = θ, y = φ).
    Dolgulu dizi indeksi p, hücre indeksi p - HALO ile eşlenir.
    """
    nx: int
    ny: int
    dx: float
    dy: float
    x0: float
    y0: float
    geometry: Geometry = Geometry.CARTESIAN
    radius: float = 1.0
    halo: int = HALO

    @property
    def spherical(self) -> bool:
        return self.geometry is Geometry.SPHERICAL

    @property
    def shape(self) -> Tuple[int, int]:
        """Dolgulu dizi boyutu"""
        return self.nx + 2 * self.halo, self.ny + 2 * self.halo

    @property
    def cell_area(self) -> float:
        """Koordinat düzlemindeki hücre ölçüsü"""
        return self.dx * self.dy

    def center(self, i: int, j: int) -> Tuple[float, float]:
        return self.x0 + (i + 0.5) * self.dx, self.y0 + (j + 0.5) * self.dy

    def x_centers(self) -> np.ndarray:
        return self.x0 + (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self, with_halo: bool = False) -> np.ndarray:
        if with_halo:
            j = np.arange(-self.halo, self.ny + self.halo)
        else:
            j = np.arange(self.ny)
        return self.y0 + (j + 0.5) * self.dy

    def sigma(self, y) -> np.ndarray:
        """Verilen ordinatlarda σ = cos(φ) (Kartezyende 1)"""
        y = np.asarray(y, dtype=float)
        if self.spherical:
            return np.cos(y)
        return np.ones_like(y)

    def dsigma(self, y) -> np.ndarray:
        """∂σ/∂φ = -sin(φ) (Kartezyende 0)"""
        y = np.asarray(y, dtype=float)
        if self.spherical:
            return -np.sin(y)
        return np.zeros_like(y)

    def to_output(self, values: np.ndarray) -> np.ndarray:
        """Koordinatları çıktı birimine çevirir (küresel gridlerde derece)"""
        return np.degrees(values) if self.spherical else np.asarray(values)


@dataclass
class StateField:
    """
    Dolgulu grid üzerindeki hücre ortalamaları

    q[0] h (h_σ), q[1] ve q[2] momentumlar, bottom H (H·σ);
    sigma_bar hayalet satırlar dahil cos(φ) satır ortalamalarını tutar.
    """
    q: np.ndarray
    bottom: np.ndarray
    sigma_bar: np.ndarray
    halo: int = field(default=HALO)

    @classmethod
    def zeros(cls, grid: Grid) -> "StateField":
        nxp, nyp = grid.shape
        sigma_bar = np.array([sigma_cell_average(grid, j)
                              for j in range(-grid.halo, grid.ny + grid.halo)])
        return cls(np.zeros((3, nxp, nyp)), np.zeros((nxp, nyp)), sigma_bar, grid.halo)

    def copy(self) -> "StateField":
        return StateField(self.q.copy(), self.bottom.copy(), self.sigma_bar.copy(), self.halo)

    def interior(self, arr: np.ndarray) -> np.ndarray:
        """Dolgulu dizinin iç bölge görünümünü döndürür (son iki eksen)"""
        g = self.halo
        return arr[..., g:-g, g:-g]

    @property
    def water(self) -> np.ndarray:
        return self.interior(self.q[0])

    @property
    def momenta(self) -> np.ndarray:
        return self.interior(self.q[1:])

    @property
    def eta_sigma(self) -> np.ndarray:
        """Dolgulu grid üzerinde η_σ = h_σ - H_σ"""
        return self.q[0] - self.bottom

    def total_volume(self, grid: Grid) -> float:
        return float(np.sum(self.water) * grid.cell_area)


def build_grid(config: GridConfig, bc: Optional[BoundarySpec] = None) -> Grid:
    """
    Yapılandırma bölümünden grid oluşturur

    Args:
        config: Grid bölümü (küresel sınırlar derece cinsinden)
        bc: Sınır koşulları; kutup tarafındaki duvar halkanın kutbu
            geçmesine izin verir, hayalet satırlar iç satırları yansıtır

    Returns:
        Grid

    Raises:
        GridError: Pozitif olmayan boyutlar veya kutbu geçen küresel halka
    """
    if config.nx < 1 or config.ny < 1:
        raise GridError("nx", f"Cell counts must be positive, got {config.nx}x{config.ny}")

    if config.geometry is Geometry.SPHERICAL:
        x0, x1 = math.radians(config.xmin), math.radians(config.xmax)
        y0, y1 = math.radians(config.ymin), math.radians(config.ymax)
    else:
        x0, x1, y0, y1 = config.xmin, config.xmax, config.ymin, config.ymax

    dx = (x1 - x0) / config.nx
    dy = (y1 - y0) / config.ny
    if dx <= 0 or dy <= 0:
        raise GridError("dx", "Cell sizes must be positive")

    if config.geometry is Geometry.SPHERICAL:
        half_pi = 0.5 * math.pi
        if y0 <= -half_pi or y1 >= half_pi:
            raise GridError("ymax", "Spherical domain must stay strictly between the poles")
        north_wall = bc is not None and bc.north is BoundaryKind.WALL
        south_wall = bc is not None and bc.south is BoundaryKind.WALL
        if y1 + HALO * dy >= half_pi and not north_wall:
            raise GridError("ymax", f"Ghost halo reaches the north pole ({math.degrees(y1 + HALO * dy):.3f} deg)")
        if y0 - HALO * dy <= -half_pi and not south_wall:
            raise GridError("ymin", f"Ghost halo reaches the south pole ({math.degrees(y0 - HALO * dy):.3f} deg)")

    grid = Grid(config.nx, config.ny, dx, dy, x0, y0, config.geometry,
                config.radius if config.geometry is Geometry.SPHERICAL else 1.0)
    logger.debug("Built %s grid %dx%d (dx=%g, dy=%g)", grid.geometry.value, grid.nx, grid.ny, dx, dy)
    return grid


def sigma_cell_average(grid: Grid, j: int) -> float:
    """
    j satırı boyunca cos(φ) değerinin tam ortalamasını hesaplar

    Args:
        grid: Grid
        j: Satır indeksi, -halo..ny+halo-1

    Returns:
        Kartezyende 1, küreselde (sin φ_üst - sin φ_alt)/Δφ
    """
    if not grid.spherical:
        return 1.0
    bottom = grid.y0 + j * grid.dy
    return (math.sin(bottom + grid.dy) - math.sin(bottom)) / grid.dy


def _fill_axis(arr: np.ndarray, axis: int, n: int, low: BoundaryKind, high: BoundaryKind,
               flip_sign: bool) -> None:
    # arr, `axis` boyunca dolgulu koordinatlarla indekslenir; iç bölge HALO..HALO+n-1
    def sl(k):
        index = [slice(None)] * arr.ndim
        index[axis] = k
        return tuple(index)

    g = HALO
    sign = -1.0 if flip_sign else 1.0
    for k in range(g):
        lo, hi = g - 1 - k, g + n + k
        if low is BoundaryKind.PERIODIC:
            arr[sl(lo)] = arr[sl(g + n - 1 - k)]
        elif low is BoundaryKind.WALL:
            arr[sl(lo)] = sign * arr[sl(g + k)]
        else:
            arr[sl(lo)] = arr[sl(g)]
        if high is BoundaryKind.PERIODIC:
            arr[sl(hi)] = arr[sl(g + k)]
        elif high is BoundaryKind.WALL:
            arr[sl(hi)] = sign * arr[sl(g + n - 1 - k)]
        else:
            arr[sl(hi)] = arr[sl(g + n - 1)]


def fill_ghosts(state: StateField, grid: Grid, bc: BoundarySpec) -> StateField:
    """
    Hayalet halkayı yerinde doldurur

    Periyodik koşul karşı şeridi kopyalar, duvar normal momentumu
    ters çevirerek yansıtır, açık koşul en yakın iç hücreyi kopyalar.
    Batimetri aynı deseni işaret değiştirmeden izler; hayalet σ̄ satırları
    kopyaladıkları satırın enlemini alır.

    Args:
        state: Grid boyutunda alan
        grid: Grid
        bc: Sınır koşulları

    Returns:
        Aynı alan
    """
    if state.q.shape[1:] != grid.shape:
        raise ValidationError("state", f"Field shape {state.q.shape[1:]} does not match grid {grid.shape}")

    # Önce x taraması, sonra tüm sütunlarda y (köşeler tutarlı dolar)
    for comp in range(3):
        _fill_axis(state.q[comp], 0, grid.nx, bc.west, bc.east, flip_sign=(comp == 1))
    _fill_axis(state.bottom, 0, grid.nx, bc.west, bc.east, flip_sign=False)

    for comp in range(3):
        _fill_axis(state.q[comp], 1, grid.ny, bc.south, bc.north, flip_sign=(comp == 2))
    _fill_axis(state.bottom, 1, grid.ny, bc.south, bc.north, flip_sign=False)
    _fill_axis(state.sigma_bar, 0, grid.ny, bc.south, bc.north, flip_sign=False)
    return state
