# Döndürülmüş 1D sistem için dengeli, yol-korunumlu HLLC dalgalanmaları

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from core.physics import GRAVITY, H_DRY, desingularised_velocity, flux_1d
from exceptions.errors import RiemannError, ValidationError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass
class RiemannInput:
    """
    Kenar noktasında döndürülmüş sol/sağ durumlar (a, m_ν, m_ν⊥), serbest
    yüzey değerleri ve etkin yerçekimi (diziler birlikte yayınlanır)
    """
    wl: np.ndarray
    wr: np.ndarray
    etal: ArrayLike
    etar: ArrayLike
    g_eff: ArrayLike = GRAVITY
    h_dry: ArrayLike = H_DRY
    vel_eps: Optional[ArrayLike] = None

    def __post_init__(self):
        self.wl = np.asarray(self.wl, dtype=float)
        self.wr = np.asarray(self.wr, dtype=float)
        self.etal = np.asarray(self.etal, dtype=float)
        self.etar = np.asarray(self.etar, dtype=float)
        self.g_eff = np.asarray(self.g_eff, dtype=float)
        if self.wl.shape[0] != 3 or self.wr.shape[0] != 3:
            raise ValidationError("wl", "States need three components")
        if np.any(self.g_eff <= 0):
            raise ValidationError("g_eff", "Effective gravity must be positive")


@dataclass
class Fluctuation:
    """Sola ve sağa giden dalgalanmalar"""
    dminus: np.ndarray
    dplus: np.ndarray = field(default=None)


def _velocity(a, m, wet, eps):
    if eps is None:
        return np.where(wet, m / np.where(wet, a, 1.0), 0.0)
    return np.where(wet, desingularised_velocity(a, m, eps), 0.0)


def _speeds(inp: RiemannInput):
    al, ar = inp.wl[0], inp.wr[0]
    wet_l = al >= inp.h_dry
    wet_r = ar >= inp.h_dry
    ul = _velocity(al, inp.wl[1], wet_l, inp.vel_eps)
    ur = _velocity(ar, inp.wr[1], wet_r, inp.vel_eps)
    cl = np.sqrt(inp.g_eff * np.where(wet_l, al, 0.0))
    cr = np.sqrt(inp.g_eff * np.where(wet_r, ar, 0.0))

    sl = np.minimum(ul - cl, ur - cr)
    sr = np.maximum(ul + cl, ur + cr)
    sl = np.where(wet_l & ~wet_r, ul - cl, np.where(~wet_l & wet_r, ur - 2.0 * cr, sl))
    sr = np.where(wet_l & ~wet_r, ul + 2.0 * cl, np.where(~wet_l & wet_r, ur + cr, sr))

    num = sl * ar * (ur - sr) - sr * al * (ul - sl)
    den = ar * (ur - sr) - al * (ul - sl)
    degenerate = np.abs(den) <= 1e-14 * (al + ar) * (np.abs(sl) + np.abs(sr))
    sstar = np.where(degenerate, 0.5 * (sl + sr), num / np.where(degenerate, 1.0, den))
    return sl, sstar, sr, wet_l, wet_r, ul, ur


def wave_speeds(inp: RiemannInput) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Dış dalga hızlarını ve temas hızını hesaplar

    Returns:
        (SL, S*, SR)

    Raises:
        RiemannError: Bir noktada iki taraf da kuru
    """
    sl, sstar, sr, wet_l, wet_r, _, _ = _speeds(inp)
    if np.any(~wet_l & ~wet_r):
        raise RiemannError()
    return sl, sstar, sr


def hllc_fluctuation(inp: RiemannInput) -> Fluctuation:
    """
    D⁻ + D⁺ = F(wr) - F(wl) + (0, g ĥ Δη, 0) sağlayan D⁻, D⁺ dalgalanmalarını hesaplar

    İki tarafı kuru olan veya eşit serbest yüzeyle durgun olan noktalar
    tam sıfır döndürür.

    Args:
        inp: Döndürülmüş kenar verisi

    Returns:
        Fluctuation
    """
    wl, wr = inp.wl, inp.wr
    al, ar = wl[0], wr[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        sl, sstar, sr, wet_l, wet_r, ul, ur = _speeds(inp)

    # Taşmayan durum: tabanı ıslak yüzeyin üstünde kalan kuru taraf
    deta = inp.etar - inp.etal
    deta = np.where(~wet_r & wet_l & (deta >= 0), 0.0, deta)
    deta = np.where(~wet_l & wet_r & (deta <= 0), 0.0, deta)

    fl = flux_1d(wl, inp.h_dry, inp.vel_eps)
    fr = flux_1d(wr, inp.h_dry, inp.vel_eps)
    h_hat = 0.5 * (al + ar)
    jump = fr - fl
    jump[1] = jump[1] + inp.g_eff * h_hat * deta

    width = sr - sl
    safe_width = np.where(width > 0, width, 1.0)
    alpha0 = (sr * np.abs(sl) - sl * np.abs(sr)) / safe_width
    alpha1 = (np.abs(sr) - np.abs(sl)) / safe_width

    dminus = np.empty(np.broadcast(jump, sl).shape)
    dplus = np.empty_like(dminus)
    dw = (deta, wr[1] - wl[1])
    for k in (0, 1):
        dminus[k] = 0.5 * (jump[k] - alpha0 * dw[k] - alpha1 * jump[k])
        dplus[k] = 0.5 * (jump[k] + alpha0 * dw[k] + alpha1 * jump[k])

    # Temasın taşıdığı teğetsel momentum
    vl = _velocity(al, wl[2], wet_l, inp.vel_eps)
    vr = _velocity(ar, wr[2], wet_r, inp.vel_eps)
    mass_flux = fl[0] + dminus[0]
    g_t = mass_flux * np.where(sstar > 0, vl, np.where(sstar < 0, vr, 0.5 * (vl + vr)))
    dminus[2] = g_t - fl[2]
    dplus[2] = fr[2] - g_t

    right_going = sl >= 0
    left_going = sr <= 0
    for k in range(3):
        dminus[k] = np.where(right_going, 0.0, np.where(left_going, jump[k], dminus[k]))
        dplus[k] = np.where(right_going, jump[k], np.where(left_going, 0.0, dplus[k]))

    skip = (~wet_l & ~wet_r) | ((wl[1] == 0) & (wr[1] == 0) & (deta == 0))
    dminus = np.where(skip, 0.0, dminus)
    dplus = np.where(skip, 0.0, dplus)
    return Fluctuation(dminus, dplus)
