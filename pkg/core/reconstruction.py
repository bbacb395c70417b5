# 13 hücrelik elmas şablonda tek skaler bileşenin CWENO rekonstrüksiyonu

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from exceptions.errors import ReconstructionError, ValidationError

logger = logging.getLogger(__name__)

# Şablon sırasıyla hücre ofsetleri: önce 3x3 blok, sonra dört uzak hücre
STENCIL_OFFSETS: Tuple[Tuple[int, int], ...] = (
    (0, 0),
    (-1, 1), (0, 1), (1, 1),
    (-1, 0), (1, 0),
    (-1, -1), (0, -1), (1, -1),
    (0, 2), (-2, 0), (2, 0), (0, -2),
)
OFFSET_INDEX: Dict[Tuple[int, int], int] = {off: k for k, off in enumerate(STENCIL_OFFSETS)}

# r sektörü (sx, sy) işaretli çeyrektir
SECTOR_SIGNS: Dict[int, Tuple[int, int]] = {1: (1, 1), 2: (1, -1), 3: (-1, -1), 4: (-1, 1)}
SECTOR_P1: Dict[int, Tuple[int, ...]] = {1: (2, 3, 5), 2: (5, 7, 8), 3: (4, 6, 7), 4: (1, 2, 4)}
SECTOR_P2: Dict[int, Tuple[int, ...]] = {
    1: (2, 3, 5, 9, 11),
    2: (5, 7, 8, 11, 12),
    3: (4, 6, 7, 10, 12),
    4: (1, 2, 4, 9, 10),
}
CENTRAL_P2: Tuple[int, ...] = tuple(range(9))
CENTRAL_P3: Tuple[int, ...] = tuple(range(13))

NCOEF = {0: 1, 1: 3, 2: 6, 3: 10}

# Her baz fonksiyonunun baş monomu X^p Y^q (φ3, φ4 sabitleri hariç)
MONOMIALS: Tuple[Tuple[int, int], ...] = (
    (0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (3, 0), (0, 3), (1, 2), (2, 1),
)


class Variant(Enum):
    """CWENO varyantı: optimal polinom / sektör polinomları"""
    P2P1 = "P2P1"
    P3P1 = "P3P1"
    P3P2 = "P3P2"

    @property
    def order(self) -> int:
        return 3 if self is Variant.P2P1 else 4

    @classmethod
    def for_order(cls, order: int) -> "Variant":
        if order == 3:
            return cls.P2P1
        if order == 4:
            return cls.P3P1
        raise ValidationError("order", f"Order must be 3 or 4, got {order}")


class EpsLaw(Enum):
    """Doğrusal olmayan ağırlıklardaki ε düzenlemesi"""
    H = "h"
    H2 = "h2"
    CONSTANT = "constant"


@dataclass(frozen=True)
class CwenoParams:
    """Rekonstrüksiyon parametreleri"""
    variant: Variant = Variant.P2P1
    d0: float = 0.75
    dr: float = 0.0625
    eps_law: EpsLaw = EpsLaw.H2
    eps_value: float = 1e-6
    h_dry: float = 1e-8

    def __post_init__(self):
        if not 0.0 < self.d0 < 1.0:
            raise ValidationError("d0", f"d0 must lie in (0,1), got {self.d0}")
        if not 0.0 < self.dr < 1.0:
            raise ValidationError("dr", f"dr must lie in (0,1), got {self.dr}")
        if abs(self.d0 + 4.0 * self.dr - 1.0) > 1e-12:
            raise ValidationError("dr", f"d0 + 4*dr must equal 1, got {self.d0 + 4.0 * self.dr}")
        if self.eps_law is EpsLaw.CONSTANT and self.eps_value <= 0:
            raise ValidationError("eps_value", "Constant epsilon must be positive")
        if self.h_dry < 0:
            raise ValidationError("h_dry", "Dry threshold must be non-negative")

    def epsilon(self, dx: float, dy: float) -> float:
        h2 = dx * dx + dy * dy
        if self.eps_law is EpsLaw.H:
            return math.sqrt(h2)
        if self.eps_law is EpsLaw.H2:
            return h2
        return self.eps_value


@dataclass
class Poly:
    """
    Sıfır ortalamalı φ0..φ9 bazında iki değişkenli polinom

    c boyutu (10, *batch); tek bir Poly, aynı dx, dy değerlerini paylaşan
    bir hücre dizisini tutabilir, koordinatlar her hücrenin kendi merkezinden ölçülür.
    """
    c: np.ndarray
    degree: int
    dx: float
    dy: float
    center: Tuple[float, float] = (0.0, 0.0)

    @classmethod
    def flat(cls, u0, dx: float, dy: float, center: Tuple[float, float] = (0.0, 0.0)) -> "Poly":
        u0 = np.asarray(u0, dtype=float)
        c = np.zeros((10,) + u0.shape)
        c[0] = u0
        return cls(c, 0, dx, dy, center)

    @property
    def average(self) -> np.ndarray:
        return self.c[0]

    def scaled(self, theta) -> "Poly":
        """ū + θ(P - ū)"""
        c = self.c.copy()
        c[1:] *= theta
        return Poly(c, self.degree, self.dx, self.dy, self.center)


@dataclass
class StencilData:
    """Elmas şablonun ū0..ū12 ortalamaları (ilk eksen), opsiyonel ıslak maske"""
    u: np.ndarray
    wet: Optional[np.ndarray] = None
    dx: float = 1.0
    dy: float = 1.0

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.shape[0] != len(STENCIL_OFFSETS):
            raise ValidationError("u", f"Stencil needs {len(STENCIL_OFFSETS)} averages, got {self.u.shape[0]}")
        if self.wet is not None:
            self.wet = np.broadcast_to(np.asarray(self.wet, dtype=bool), self.u.shape)
        if self.dx <= 0 or self.dy <= 0:
            raise ValidationError("dx", "Cell sizes must be positive")


def basis_values(X, Y, dx: float, dy: float) -> List[np.ndarray]:
    """Yerel (X, Y) koordinatlarında φ0..φ9"""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    X2, Y2 = X * X, Y * Y
    return [np.ones_like(X * Y), X, Y, X2 - dx * dx / 12.0, Y2 - dy * dy / 12.0,
            X * Y, X2 * X, Y2 * Y, X * Y2, X2 * Y]


def basis_gradients(X, Y) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Yerel (X, Y) koordinatlarında ∂φk/∂x ve ∂φk/∂y"""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    zero = np.zeros_like(X * Y)
    one = zero + 1.0
    gx = [zero, one, zero, 2 * X, zero, Y, 3 * X * X, zero, Y * Y, 2 * X * Y]
    gy = [zero, zero, one, zero, 2 * Y, X, zero, 3 * Y * Y, 2 * X * Y, X * X]
    return gx, gy


def cell_basis_averages(a: int, b: int, dx: float, dy: float) -> np.ndarray:
    """(a, b) ofsetindeki hücre üzerinde φ0..φ9 tam ortalamaları"""
    return np.array([
        1.0,
        a * dx,
        b * dy,
        a * a * dx * dx,
        b * b * dy * dy,
        a * b * dx * dy,
        dx ** 3 * (a ** 3 + a / 4.0),
        dy ** 3 * (b ** 3 + b / 4.0),
        dx * dy * dy * a * (b * b + 1.0 / 12.0),
        dx * dx * dy * (a * a + 1.0 / 12.0) * b,
    ])


def _sum_terms(p: Poly, terms: Sequence[np.ndarray]) -> np.ndarray:
    n = NCOEF[p.degree]
    out = p.c[0] * terms[0]
    for k in range(1, n):
        out = out + p.c[k] * terms[k]
    return out


def evaluate_local(p: Poly, X, Y) -> np.ndarray:
    """Çapa merkezinden (X, Y) ofsetlerindeki değer"""
    return _sum_terms(p, basis_values(X, Y, p.dx, p.dy))


def evaluate(p: Poly, x, y) -> np.ndarray:
    """
    Baz açılımının noktasal değerini hesaplar

    Args:
        p: Polinom
        x, y: Mutlak koordinatlar

    Returns:
        P(x, y)
    """
    return evaluate_local(p, np.asarray(x) - p.center[0], np.asarray(y) - p.center[1])


def gradient_local(p: Poly, X, Y) -> Tuple[np.ndarray, np.ndarray]:
    gx, gy = basis_gradients(X, Y)
    return _sum_terms(p, gx), _sum_terms(p, gy)


def evaluate_gradient(p: Poly, x, y) -> Tuple[np.ndarray, np.ndarray]:
    """Mutlak koordinatlarda tam gradyan (∂P/∂x, ∂P/∂y)"""
    return gradient_local(p, np.asarray(x) - p.center[0], np.asarray(y) - p.center[1])


def fit_least_squares(offsets: Sequence[Tuple[int, int]], degree: int, u, u0,
                      dx: float, dy: float) -> Poly:
    """
    Merkez ortalamayı tam koruyan en küçük kareler polinomu

    Args:
        offsets: Hücre ofsetleri (di, dj), (0, 0) hariç
        degree: 1, 2 veya 3
        u: Ofsetlerdeki ortalamalar (ilk eksen), opsiyonel olarak toplu
        u0: Merkez ortalama
        dx, dy: Hücre boyutları

    Returns:
        İstenen dereceden Poly

    Raises:
        ValidationError: Hatalı argümanlar
        ReconstructionError: Ofsetler dereceyi belirlemiyor
    """
    if degree not in (1, 2, 3):
        raise ValidationError("degree", f"Degree must be 1, 2 or 3, got {degree}")
    offsets = [tuple(o) for o in offsets]
    if (0, 0) in offsets:
        raise ValidationError("offsets", "Central cell must not appear in the offsets")
    u = np.asarray(u, dtype=float)
    if u.shape[0] != len(offsets):
        raise ValidationError("u", f"Expected {len(offsets)} averages, got {u.shape[0]}")

    m = NCOEF[degree] - 1
    A = np.array([cell_basis_averages(a, b, dx, dy)[1:m + 1] for a, b in offsets])
    if len(offsets) < m or np.linalg.matrix_rank(A) < m:
        raise ReconstructionError(f"Rank-deficient least-squares fit for degree {degree} on {len(offsets)} cells")

    batch = u.shape[1:]
    u0 = np.broadcast_to(np.asarray(u0, dtype=float), batch)
    rhs = (u - u0).reshape(len(offsets), -1)
    sol, _, _, _ = np.linalg.lstsq(A, rhs, rcond=None)

    c = np.zeros((10,) + batch)
    c[0] = u0
    c[1:m + 1] = sol.reshape((m,) + batch)
    return Poly(c, degree, dx, dy)


def fit_p2_central(s: StencilData) -> Poly:
    """3x3 blok üzerinde 2. derece en küçük kareler fiti"""
    u, dx, dy = s.u, s.dx, s.dy
    c = np.zeros((10,) + u.shape[1:])
    c[0] = u[0]
    c[1] = ((u[3] - u[1]) + (u[5] - u[4]) + (u[8] - u[6])) / (6.0 * dx)
    c[2] = ((u[1] - u[6]) + (u[2] - u[7]) + (u[3] - u[8])) / (6.0 * dy)
    c[3] = ((u[1] - 2 * u[2] + u[3]) + 3 * (u[4] - 2 * u[0] + u[5])
            + (u[6] - 2 * u[7] + u[8])) / (10.0 * dx * dx)
    c[4] = ((u[1] - 2 * u[4] + u[6]) + 3 * (u[2] - 2 * u[0] + u[7])
            + (u[3] - 2 * u[5] + u[8])) / (10.0 * dy * dy)
    c[5] = ((u[3] - u[1]) - (u[8] - u[6])) / (4.0 * dx * dy)
    return Poly(c, 2, s.dx, s.dy)


def fit_p3_central(s: StencilData) -> Poly:
    """Tüm elmas üzerinde 3. derece en küçük kareler fiti"""
    u, dx, dy = s.u, s.dx, s.dy
    c = np.zeros((10,) + u.shape[1:])
    c[0] = u[0]
    c[1] = (36 * (u[5] - u[4]) - 5 * (u[11] - u[10])
            - (u[8] - u[6]) - (u[3] - u[1])) / (48.0 * dx)
    c[2] = (36 * (u[2] - u[7]) - 5 * (u[9] - u[12])
            - (u[1] - u[6]) - (u[3] - u[8])) / (48.0 * dy)
    c[3] = (76 * (u[11] - 2 * u[0] + u[10]) + 19 * (u[5] - 2 * u[0] + u[4])
            + 17 * (u[3] - 2 * u[2] + u[1]) + 17 * (u[6] - 2 * u[7] + u[8])
            + 32 * (u[2] - 2 * u[0] + u[7]) - 8 * (u[9] - 2 * u[0] + u[12])) / (714.0 * dx * dx)
    c[4] = (76 * (u[9] - 2 * u[0] + u[12]) + 19 * (u[2] - 2 * u[0] + u[7])
            + 17 * (u[1] - 2 * u[4] + u[6]) + 17 * (u[3] - 2 * u[5] + u[8])
            + 32 * (u[4] - 2 * u[0] + u[5]) - 8 * (u[10] - 2 * u[0] + u[11])) / (714.0 * dy * dy)
    c[5] = ((u[3] - u[1]) - (u[8] - u[6])) / (4.0 * dx * dy)
    c[6] = ((u[11] - u[10]) - 2 * (u[5] - u[4])) / (12.0 * dx ** 3)
    c[7] = ((u[9] - u[12]) - 2 * (u[2] - u[7])) / (12.0 * dy ** 3)
    c[8] = ((u[3] - u[1]) - 2 * (u[5] - u[4]) + (u[8] - u[6])) / (4.0 * dx * dy * dy)
    c[9] = ((u[1] - u[6]) - 2 * (u[2] - u[7]) + (u[3] - u[8])) / (4.0 * dx * dx * dy)
    return Poly(c, 3, s.dx, s.dy)


def _sector_jumps(r: int, s: StencilData):
    if r not in SECTOR_SIGNS:
        raise ValidationError("r", f"Sector index must be 1..4, got {r}")
    sx, sy = SECTOR_SIGNS[r]
    u0 = s.u[0]
    bx = s.u[OFFSET_INDEX[(sx, 0)]] - u0
    by = s.u[OFFSET_INDEX[(0, sy)]] - u0
    bc = s.u[OFFSET_INDEX[(sx, sy)]] - u0
    return sx, sy, bx, by, bc


def fit_p1_sector(r: int, s: StencilData) -> Poly:
    """r çeyreğinin üç hücresinde doğrusal en küçük kareler fiti"""
    sx, sy, bx, by, bc = _sector_jumps(r, s)
    c = np.zeros((10,) + s.u.shape[1:])
    c[0] = s.u[0]
    c[1] = sx * (bc - by + 2 * bx) / (3.0 * s.dx)
    c[2] = sy * (bc - bx + 2 * by) / (3.0 * s.dy)
    return Poly(c, 1, s.dx, s.dy)


def fit_p2_sector(r: int, s: StencilData) -> Poly:
    """r çeyreğinin beş hücresinde ikinci derece fit (interpolasyonlu)"""
    sx, sy, bx, by, bc = _sector_jumps(r, s)
    u0 = s.u[0]
    bxx = s.u[OFFSET_INDEX[(2 * sx, 0)]] - u0
    byy = s.u[OFFSET_INDEX[(0, 2 * sy)]] - u0
    dx, dy = s.dx, s.dy
    c = np.zeros((10,) + s.u.shape[1:])
    c[0] = u0
    c[1] = sx * (4 * bx - bxx) / (2.0 * dx)
    c[2] = sy * (4 * by - byy) / (2.0 * dy)
    c[3] = (bxx - 2 * bx) / (2.0 * dx * dx)
    c[4] = (byy - 2 * by) / (2.0 * dy * dy)
    c[5] = sx * sy * (bc - bx - by) / (dx * dy)
    return Poly(c, 2, dx, dy)


def compute_p0(p_opt: Poly, sector_polys: Sequence[Poly], d0: float,
               dr: Union[float, Sequence[float]]) -> Poly:
    """
    Merkez polinom P0 = (P_opt - Σ d_r P_r) / d0

    Raises:
        ReconstructionError: d0 sıfır
    """
    if d0 == 0:
        raise ReconstructionError("Linear coefficient d0 must be nonzero")
    if len(sector_polys) != 4:
        raise ValidationError("sector_polys", f"Expected 4 sector polynomials, got {len(sector_polys)}")
    drs = [dr] * 4 if np.isscalar(dr) else list(dr)
    c = p_opt.c.copy()
    for d, p in zip(drs, sector_polys):
        c = c - d * p.c
    c = c / d0
    c[0] = p_opt.c[0]
    c[NCOEF[p_opt.degree]:] = 0.0
    return Poly(c, p_opt.degree, p_opt.dx, p_opt.dy, p_opt.center)


def _falling(p: int, a: int) -> int:
    out = 1
    for k in range(a):
        out *= p - k
    return out


def _moment(m: int, length: float) -> float:
    if m % 2:
        return 0.0
    half = 0.5 * length
    return 2.0 * half ** (m + 1) / (m + 1)


@lru_cache(maxsize=64)
def indicator_matrix(dx: float, dy: float) -> np.ndarray:
    """
    I[P] = c[1:]ᵀ Q c[1:] sağlayan Q kuadratik formu

    Baz türevlerinin çarpımlarının çapa hücre üzerindeki tam integralleri,
    h^(2|α|-2) ile ağırlıklı, h² = dx² + dy².
    """
    h2 = dx * dx + dy * dy
    Q = np.zeros((9, 9))
    derivatives = [(a, b) for n in (1, 2, 3) for a in range(n + 1) for b in (n - a,)]
    for k in range(1, 10):
        pk, qk = MONOMIALS[k]
        for l in range(1, 10):
            pl, ql = MONOMIALS[l]
            total = 0.0
            for a, b in derivatives:
                if pk < a or qk < b or pl < a or ql < b:
                    continue
                coef = _falling(pk, a) * _falling(qk, b) * _falling(pl, a) * _falling(ql, b)
                integral = _moment(pk + pl - 2 * a, dx) * _moment(qk + ql - 2 * b, dy)
                total += h2 ** (a + b - 1) * coef * integral
            Q[k - 1, l - 1] = total
    Q.setflags(write=False)
    return Q


def smoothness_indicator(p: Poly) -> np.ndarray:
    """
    Polinomun salınım göstergesini hesaplar

    Returns:
        Negatif olmayan değer (p gibi toplu)
    """
    Q = indicator_matrix(float(p.dx), float(p.dy))
    c = p.c[1:]
    value = np.einsum("kl,k...,l...->...", Q, c, c)
    return np.maximum(value, 0.0)


def nonlinear_weights(indicators, d, eps: float) -> np.ndarray:
    """
    Doğrusal olmayan ağırlıklar ω_r = α_r / Σ α_s, α_r = d_r / (I_r + ε)²

    Args:
        indicators: Göstergeler (ilk eksen = aday)
        d: Doğrusal katsayılar, aynı ilk eksen; sıfır girdiler sıfır kalır
        eps: Düzenleme, pozitif

    Returns:
        Herhangi bir d_r sıfırdan farklıysa toplamı 1 olan ağırlıklar
    """
    if eps <= 0:
        raise ValidationError("eps", f"Epsilon must be positive, got {eps}")
    indicators = np.asarray(indicators, dtype=float)
    d = np.asarray(d, dtype=float)
    d = d.reshape(d.shape + (1,) * (indicators.ndim - d.ndim))
    alpha = d / (indicators + eps) ** 2
    total = alpha.sum(axis=0)
    return np.divide(alpha, total, out=np.zeros(np.broadcast(alpha, total).shape), where=total > 0)


def reconstruct_cell(s: StencilData, params: CwenoParams) -> Poly:
    """
    Tek hücrede (veya hücre grubunda) CWENO rekonstrüksiyonu

    Kuru hücreler düz polinom alır. Merkez şablonda herhangi bir kuru hücre
    P0 adayını, bir sektördeki kuru hücre o sektörü düşürür; kalan doğrusal
    ağırlıklar yeniden normalize edilir, aday kalmazsa sonuç düzdür.

    Args:
        s: Şablon ortalamaları ve ıslak maske
        params: Varyant, doğrusal ağırlıklar ve ε kuralı

    Returns:
        c0 hücre ortalamasına eşit rekonstrüksiyon polinomu
    """
    u = s.u
    batch = u.shape[1:]
    wet = np.ones(u.shape, dtype=bool) if s.wet is None else s.wet

    if params.variant is Variant.P2P1:
        p_opt = fit_p2_central(s)
        central = CENTRAL_P2
    else:
        p_opt = fit_p3_central(s)
        central = CENTRAL_P3

    if params.variant is Variant.P3P2:
        sectors = [fit_p2_sector(r, s) for r in (1, 2, 3, 4)]
        sector_cells = SECTOR_P2
    else:
        sectors = [fit_p1_sector(r, s) for r in (1, 2, 3, 4)]
        sector_cells = SECTOR_P1

    candidates = [compute_p0(p_opt, sectors, params.d0, params.dr)] + sectors

    d_hat = np.empty((5,) + batch)
    d_hat[0] = np.where(wet[list(central)].all(axis=0), params.d0, 0.0)
    for r in (1, 2, 3, 4):
        cells = (0,) + sector_cells[r]
        d_hat[r] = np.where(wet[list(cells)].all(axis=0), params.dr, 0.0)
    total = d_hat.sum(axis=0)
    d_hat = np.divide(d_hat, total, out=np.zeros_like(d_hat), where=total > 0)

    indicators = np.stack([smoothness_indicator(p) for p in candidates])
    omega = nonlinear_weights(indicators, d_hat, params.epsilon(s.dx, s.dy))

    coeffs = np.stack([p.c for p in candidates])
    c = np.einsum("r...,rk...->k...", omega, coeffs)
    c[0] = u[0]
    flat = ~wet[0] | (total <= 0)
    c[1:] = np.where(flat, 0.0, c[1:])
    return Poly(c, p_opt.degree, s.dx, s.dy)


def limiter_theta(u0, point_values, threshold) -> np.ndarray:
    """
    Her nokta değerini eşiğe taşıyan θ ∈ [0, 1] ölçek faktörü

    Args:
        u0: Hücre ortalamaları (toplu)
        point_values: Kuadratür noktalarındaki değerler (ilk eksen = nokta)
        threshold: İzin verilen en küçük değer, point_values ile yayınlanabilir
    """
    values = np.asarray(point_values, dtype=float)
    u0 = np.asarray(u0, dtype=float)
    t = np.broadcast_to(np.asarray(threshold, dtype=float), values.shape)
    below = values < t
    denom = u0 - values
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(below & (denom > 0), (u0 - t) / denom, np.where(below, 0.0, 1.0))
    return np.clip(ratio.min(axis=0), 0.0, 1.0)


def positivity_limit(p: Poly, u0, point_values, h_dry) -> Poly:
    """
    Tüm nokta değerleri ≥ h_dry kalacak şekilde p polinomunu ortalamasına doğru ölçekler

    Args:
        p: Su sütunu rekonstrüksiyonu
        u0: Hücre ortalaması
        point_values: Şemanın kullandığı her kuadratür noktasında p
        h_dry: Eşik (skaler veya nokta bazlı)

    Returns:
        ū + θ(p - ū)
    """
    theta = limiter_theta(u0, point_values, h_dry)
    if np.all(theta == 1.0):
        return p
    return p.scaled(theta)
