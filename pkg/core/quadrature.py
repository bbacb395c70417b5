# Referans hücre [-1/2, 1/2]^2 üzerinde Gauss-Legendre kuralları

from functools import lru_cache
from typing import Tuple

import numpy as np

from exceptions.errors import ValidationError


@lru_cache(maxsize=None)
def gauss_rule(npoints: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    [-1/2, 1/2] üzerinde tek boyutlu Gauss-Legendre kuralı

    Args:
        npoints: Düğüm sayısı (1..8)

    Returns:
        (nodes, weights), ağırlıkların toplamı 1

    Raises:
        ValidationError: Desteklenmeyen düğüm sayısı
    """
    if npoints < 1 or npoints > 8:
        raise ValidationError("npoints", f"Gauss rule needs 1..8 nodes, got {npoints}")
    nodes, weights = np.polynomial.legendre.leggauss(npoints)
    nodes = 0.5 * nodes
    weights = 0.5 * weights
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=None)
def tensor_rule(npoints: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Referans hücre üzerinde tensör çarpım kuralı

    Returns:
        Düzleştirilmiş (xi, eta, weights); en yavaş değişen xi
    """
    nodes, weights = gauss_rule(npoints)
    xi, eta = np.meshgrid(nodes, nodes, indexing="ij")
    w = np.outer(weights, weights)
    xi = xi.ravel()
    eta = eta.ravel()
    w = w.ravel()
    for arr in (xi, eta, w):
        arr.setflags(write=False)
    return xi, eta, w
