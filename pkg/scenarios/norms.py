# Hata normları ve gözlenen yakınsama oranları

import math
from typing import List, Optional, Sequence

import numpy as np

from core.grid import Grid, StateField
from exceptions.errors import ValidationError


def l1_error(state: StateField, reference: StateField, grid: Grid, component: int = 0) -> float:
    """
    İç hücreler üzerinde L¹ uzaklığı Σ|a_i - ref_i|·|Ω_i|

    Args:
        state: Hesaplanan alan
        reference: Aynı grid üzerindeki referans alan
        grid: Grid
        component: 0 su sütunu, 1 ve 2 momentumlar

    Raises:
        ValidationError: Boyut uyuşmazlığı veya hatalı bileşen
    """
    if component not in (0, 1, 2):
        raise ValidationError("component", f"Component must be 0, 1 or 2, got {component}")
    if state.q.shape != reference.q.shape:
        raise ValidationError("reference", "Fields have different shapes")
    diff = state.interior(state.q[component]) - reference.interior(reference.q[component])
    return float(np.sum(np.abs(diff)) * grid.cell_area)


def observed_rates(errors: Sequence[float]) -> List[Optional[float]]:
    """Ardışık grid ikiye katlamaları için log2(err_{n-1}/err_n); ilk değer None"""
    rates: List[Optional[float]] = [None]
    for prev, cur in zip(errors[:-1], errors[1:]):
        if prev > 0 and cur > 0:
            rates.append(math.log2(prev / cur))
        else:
            rates.append(None)
    return rates
