# Sığ su modelinin terimleri, Kartezyen ve küresel (σ = cos φ) biçimde

import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from core.grid import Geometry
from exceptions.errors import DryStateError, ValidationError

logger = logging.getLogger(__name__)

GRAVITY = 9.81
H_DRY = 1e-8

AxisLike = Union[int, str]
_AXES = {"x": 0, "theta": 0, "θ": 0, "y": 1, "phi": 1, "φ": 1}


@dataclass
class State:
    """Su sütunu ve iki momentum ((3, ...) dizisinin ilk ekseni)"""
    a: np.ndarray
    m1: np.ndarray
    m2: np.ndarray

    @classmethod
    def from_array(cls, w) -> "State":
        w = np.asarray(w, dtype=float)
        return cls(w[0], w[1], w[2])

    def to_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.a, self.m1, self.m2))


@dataclass
class EdgeGeometry:
    """Normal n, kenar noktasındaki σ, δ ve ölçeklenmiş normal ν"""
    n: Tuple[float, float]
    sigma: np.ndarray
    delta: np.ndarray
    nu: Tuple[np.ndarray, np.ndarray]


def axis_index(axis: AxisLike) -> int:
    if isinstance(axis, str):
        key = axis.lower()
        if key not in _AXES:
            raise ValidationError("axis", f"Unknown axis: {axis}")
        return _AXES[key]
    if axis not in (0, 1):
        raise ValidationError("axis", f"Axis must be 0 or 1, got {axis}")
    return int(axis)


def velocities(w: np.ndarray, h_dry: float = H_DRY, threshold=None,
               eps=None) -> Tuple[np.ndarray, np.ndarray]:
    """
    m/a hızlarını hesaplar, sütun kuru eşiğin altındaysa sıfır döner

    Args:
        w: (3, ...) durumlar
        h_dry: a için kuru eşik
        threshold: h_dry yerine geçen nokta bazlı eşik (opsiyonel)
        eps: Düzenleme ölçeği (opsiyonel, bkz. desingularised_velocity)
    """
    a = w[0]
    t = h_dry if threshold is None else threshold
    wet = a >= t
    if eps is not None:
        return (np.where(wet, desingularised_velocity(a, w[1], eps), 0.0),
                np.where(wet, desingularised_velocity(a, w[2], eps), 0.0))
    safe = np.where(wet, a, 1.0)
    return np.where(wet, w[1] / safe, 0.0), np.where(wet, w[2] / safe, 0.0)


def desingularised_velocity(a, m, eps, h_vel=0.0) -> np.ndarray:
    """
    Kuru durumlara yakın bölgede düzenlenmiş m/a hızı

    a ≥ eps için m/a, altında 2am/(a² + eps²), a < h_vel için sıfır.
    eps ve h_vel noktadan noktaya değişebilir (küresel gridlerde σ ile ölçeklenir).

    Raises:
        ValidationError: Pozitif olmayan eps
    """
    a = np.asarray(a, dtype=float)
    m = np.asarray(m, dtype=float)
    eps = np.asarray(eps, dtype=float)
    if np.any(eps <= 0):
        raise ValidationError("eps", "Velocity regularisation scale must be positive")
    deep = a >= eps
    safe = np.where(deep, a, 1.0)
    shallow = 2.0 * a * m / (a * a + eps * eps)
    u = np.where(deep, m / safe, shallow)
    return np.where(a < h_vel, 0.0, u)


def desingularise(w, eps, h_vel=0.0) -> np.ndarray:
    """
    Momentumları düzenlenmiş hızlardan a·u olarak yeniden kurar

    eps ve h_vel değerlerinin ikisine de ulaşan sütunlar momentumlarını bit bit korur.
    """
    w = np.asarray(w, dtype=float)
    a = np.maximum(w[0], 0.0)
    u1 = desingularised_velocity(a, w[1], eps, h_vel)
    u2 = desingularised_velocity(a, w[2], eps, h_vel)
    keep = (a >= eps) & (a >= h_vel)
    m1 = np.where(keep, w[1], a * u1)
    m2 = np.where(keep, w[2], a * u2)
    return np.stack(np.broadcast_arrays(a, m1, m2))


def _check_dry(w: np.ndarray, h_dry: float, component: str) -> None:
    dry = w[0] < h_dry
    if np.any(dry & ((w[1] != 0) | (w[2] != 0))):
        raise DryStateError(component)


def flux_cartesian(w, axis: AxisLike, h_dry: float = H_DRY) -> np.ndarray:
    """
    Basınç terimi olmadan konvektif akı

    Args:
        w: (h, q_x, q_y), ilk eksen
        axis: x veya y

    Returns:
        x için (q_x, q_x²/h, q_x q_y/h), y için (q_y, q_x q_y/h, q_y²/h)

    Raises:
        DryStateError: Momentum taşıyan kuru durum
    """
    w = np.asarray(w, dtype=float)
    _check_dry(w, h_dry, "flux_cartesian")
    return flux_spherical(w, 1.0, axis, h_dry)


def flux_spherical(w, sigma, axis: AxisLike, h_dry: float = H_DRY, eps=None) -> np.ndarray:
    """
    σ ağırlıklı sistemin konvektif akısı

    Args:
        w: (h_σ, Q_θ, Q_φ), leading axis
        sigma: Aynı noktalardaki cos(φ)
        axis: θ veya φ
        eps: Hız düzenleme ölçeği (opsiyonel)

    Returns:
        θ: (Q_θ/σ, Q_θ²/(h_σσ), Q_φQ_θ/(h_σσ)); φ: (Q_φ, Q_θQ_φ/h_σ, Q_φ²/h_σ)
    """
    w = np.asarray(w, dtype=float)
    _check_dry(w, h_dry, "flux_spherical")
    sigma = np.asarray(sigma, dtype=float)
    ax = axis_index(axis)
    u1, u2 = velocities(w, h_dry, eps=eps)
    if ax == 0:
        return np.stack(np.broadcast_arrays(w[1] / sigma, w[1] * u1 / sigma, w[2] * u1 / sigma))
    return np.stack(np.broadcast_arrays(w[2], w[1] * u2, w[2] * u2))


def pressure_vector(a, sigma, axis: AxisLike, geometry: Geometry = Geometry.CARTESIAN,
                    g: float = GRAVITY) -> np.ndarray:
    """
    Korunumsuz basınç çarpımının katsayı vektörü

    Kartezyen: (0, g h, 0) / (0, 0, g h). Küresel: (0, g h_σ/σ², 0) / (0, 0, g h_σ/σ).
    """
    a = np.asarray(a, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    ax = axis_index(axis)
    if geometry is Geometry.SPHERICAL:
        value = g * a / sigma ** 2 if ax == 0 else g * a / sigma
    else:
        value = g * a * np.ones_like(sigma)
    zero = np.zeros_like(value)
    if ax == 0:
        return np.stack([zero, value, zero])
    return np.stack([zero, zero, value])


def geometric_source(w, sigma, f, g: float = GRAVITY, h_dry: float = H_DRY, eps=None) -> np.ndarray:
    """
    Küresel kaynak G¹ + G², ∂σ/∂φ ile çarpılır

    Args:
        w: (h_σ, Q_θ, Q_φ)
        sigma: cos(φ)
        f: η_σ yerine geçen dalgalanma değeri

    Returns:
        (0, Q_θQ_φ/(h_σσ), -Q_θ²/(h_σσ) - g h_σ f/σ²), kuru durumlarda sıfır
    """
    w = np.asarray(w, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    f = np.asarray(f, dtype=float)
    u1, u2 = velocities(w, h_dry, eps=eps)
    wet = w[0] >= h_dry
    second = w[1] * u2 / sigma
    third = -w[1] * u1 / sigma - np.where(wet, g * w[0] * f / sigma ** 2, 0.0)
    zero = np.zeros(np.broadcast(second, third).shape)
    return np.stack([zero, second + zero, third + zero])


def rotate(w, nu) -> np.ndarray:
    """(a, m1, m2) → (a, ν_θm1 + ν_φm2, -ν_φm1 + ν_θm2)"""
    w = np.asarray(w, dtype=float)
    n1, n2 = nu
    return np.stack(np.broadcast_arrays(w[0], n1 * w[1] + n2 * w[2], -n2 * w[1] + n1 * w[2]))


def unrotate(w, nu) -> np.ndarray:
    """rotate işleminin tersi"""
    w = np.asarray(w, dtype=float)
    n1, n2 = nu
    return np.stack(np.broadcast_arrays(w[0], n1 * w[1] - n2 * w[2], n2 * w[1] + n1 * w[2]))


def edge_geometry(geometry: Geometry, normal: Tuple[int, int], sigma) -> EdgeGeometry:
    """
    Eksene hizalı kenar normali için δ ve ν hesaplar

    Args:
        geometry: Grid geometrisi
        normal: (±1, 0) veya (0, ±1)
        sigma: Kenar nokta(lar)ındaki σ

    Raises:
        ValidationError: Normal eksene hizalı değil veya σ pozitif değil
    """
    nt, np_ = normal
    if (abs(nt), abs(np_)) not in ((1, 0), (0, 1)):
        raise ValidationError("normal", f"Edge normal must be axis-aligned, got {normal}")
    sigma = np.asarray(sigma, dtype=float)
    if geometry is not Geometry.SPHERICAL:
        one = np.ones_like(sigma)
        return EdgeGeometry(normal, one, one, (nt * one, np_ * one))
    if np.any(sigma <= 0):
        raise ValidationError("sigma", "σ must be positive")
    delta = np.sqrt(nt * nt / sigma ** 2 + np_ * np_)
    nu = (nt / (sigma * delta), np_ / delta)
    return EdgeGeometry(normal, sigma, delta, nu)


def flux_normal(w, sigma, normal: Tuple[int, int], h_dry: float = H_DRY, eps=None) -> np.ndarray:
    """Eksene hizalı normal için F_n = n_θ F_θ + n_φ F_φ"""
    nt, np_ = normal
    if nt:
        return nt * flux_spherical(w, sigma, 0, h_dry, eps)
    return np_ * flux_spherical(w, sigma, 1, h_dry, eps)


def flux_1d(w, h_dry=H_DRY, eps=None) -> np.ndarray:
    """Döndürülmüş 1D akı (m, m u, t u); u = m/a veya düzenlenmiş hali"""
    w = np.asarray(w, dtype=float)
    u, _ = velocities(w, threshold=h_dry, eps=eps)
    return np.stack([w[1], w[1] * u, w[2] * u])
