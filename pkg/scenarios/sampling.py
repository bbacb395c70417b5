# Analitik alanların hücre ortalaması ve nokta örneklemesi

from typing import Callable, Tuple

import numpy as np

from core.grid import Grid, StateField
from core.quadrature import tensor_rule
from exceptions.errors import ValidationError

Field2D = Callable[[np.ndarray, np.ndarray], np.ndarray]


def quadrature_nodes(grid: Grid, npoints: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Her iç hücrenin mutlak düğüm koordinatları (nx, ny, npts) ve ağırlıkları"""
    xi, eta, w = tensor_rule(npoints)
    X = grid.x_centers()[:, None, None] + xi[None, None, :] * grid.dx
    Y = grid.y_centers()[None, :, None] + eta[None, None, :] * grid.dy
    X, Y = np.broadcast_arrays(X, Y)
    return X, Y, w


def cell_average(func: Field2D, grid: Grid, npoints: int = 3, sigma_weighted: bool = False) -> np.ndarray:
    """
    Analitik bir fonksiyonun tensör-Gauss hücre ortalamaları

    Args:
        func: Grid koordinatlarında f(x, y) (küresel gridlerde radyan)
        grid: Grid
        npoints: Yön başına Gauss düğümü
        sigma_weighted: f yerine f·cos(φ) ortalaması

    Returns:
        İç hücreler üzerinde (nx, ny) ortalamalar; integrandın sabit
        olduğu hücreler bu sabiti tam olarak alır
    """
    X, Y, w = quadrature_nodes(grid, npoints)
    values = np.broadcast_to(np.asarray(func(X, Y), dtype=float), X.shape)
    if sigma_weighted:
        values = values * grid.sigma(Y)
    constant = (values == values[..., :1]).all(axis=-1)
    return np.where(constant, values[..., 0], values @ w)


def locate_cell(grid: Grid, x: float, y: float) -> Tuple[int, int]:
    """
    (x, y) noktasını içeren iç hücre, çıktı birimlerinde (küreselde derece)

    Raises:
        ValidationError: Nokta alanın dışında
    """
    if grid.spherical:
        x, y = np.radians(x), np.radians(y)
    i = int(np.floor((x - grid.x0) / grid.dx))
    j = int(np.floor((y - grid.y0) / grid.dy))
    if not (0 <= i < grid.nx and 0 <= j < grid.ny):
        raise ValidationError("gauge", f"Point ({x}, {y}) lies outside the domain")
    return i, j


def surface_at(state: StateField, grid: Grid, cell: Tuple[int, int]) -> float:
    """İçeren hücrenin ortalamalarından serbest yüzey η = h - H"""
    i, j = cell
    g = grid.halo
    sb = state.sigma_bar[g + j]
    return float((state.q[0, g + i, g + j] - state.bottom[g + i, g + j]) / sb)
