# Aşama son işlemesi ve gözlemcilerle SSP-RK3 zaman ilerletme

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from core.grid import BoundarySpec, Grid, StateField, fill_ghosts
from core.physics import desingularise
from exceptions.errors import StabilityError, TimeStepError, ValidationError
from solver.scheme import SchemeConfig, SemidiscreteOperator, stable_dt

logger = logging.getLogger(__name__)

Operator = Callable[[StateField], np.ndarray]


class Observer(Protocol):
    """
    (time, field) ile çağrılır

    `times` ilerleticinin tam olarak ineceği anları listeler; None her
    adım (ve başlangıç durumu) anlamına gelir.
    """
    times: Optional[Sequence[float]]

    def __call__(self, time: float, state: StateField) -> None:
        ...


@dataclass
class StepRecord:
    """Kabul edilen tek zaman adımı"""
    step: int
    time: float
    dt: float
    volume: float
    clamps: int


@dataclass
class StepStats:
    """İlerleme sırasında toplanan sayaçlar"""
    clamps: int = 0


@contextmanager
def _operator_scope(grid: Grid, bc: BoundarySpec, cfg: SchemeConfig,
                    operator: Optional[Operator]) -> Iterator[Operator]:
    if operator is not None:
        yield operator
        return
    with SemidiscreteOperator(grid, bc, cfg) as owned:
        yield owned


def _with_interior(state: StateField, values: np.ndarray) -> StateField:
    out = state.copy()
    out.interior(out.q)[...] = values
    return out


def finish_stage(state: StateField, grid: Grid, bc: BoundarySpec, cfg: SchemeConfig,
                 stage: int, stats: Optional[StepStats] = None) -> StateField:
    """
    Runge-Kutta aşamasını yerinde son işlemden geçirir

    Negatif su sütunları sıfıra kırpılır, sığ hücrelerin momentumları
    düzenlenmiş hızlardan yeniden kurulur (hız eşiğinin altında sıfırlanır)
    ve halka yeniden doldurulur.

    Raises:
        StabilityError: İç bölgede sonlu olmayan değer
    """
    q = state.interior(state.q)
    finite = np.isfinite(q)
    if not finite.all():
        comp, i, j = (int(k) for k in np.argwhere(~finite)[0])
        raise StabilityError((comp, i, j), stage)

    a = q[0]
    negative = a < 0
    count = int(negative.sum())
    if count:
        logger.warning("Stage %d: clamped %d negative water columns", stage, count)
        a[negative] = 0.0
        if stats is not None:
            stats.clamps += count

    sb = state.sigma_bar[grid.halo:grid.halo + grid.ny][None, :]
    w = desingularise(q, cfg.vel_eps * sb, cfg.velocity_floor * sb)
    q[1][...] = w[1]
    q[2][...] = w[2]
    return fill_ghosts(state, grid, bc)


def ssp_rk3_step(state: StateField, grid: Grid, bc: BoundarySpec, cfg: SchemeConfig, dt: float,
                 operator: Optional[Operator] = None, stats: Optional[StepStats] = None) -> StateField:
    """
    Üç aşamalı, güçlü kararlılık koruyan Runge-Kutta adımı

    Args:
        state: Hayalet hücreleri doldurulmuş alan
        grid: Grid
        bc: Sınır koşulları
        cfg: Şema yapılandırması
        dt: Zaman adımı
        operator: Sağ taraf L(u); varsayılan yarı-ayrık şemadır
        stats: Kırpma sayacı (opsiyonel)

    Returns:
        t + dt anındaki yeni alan
    """
    if dt < 0:
        raise ValidationError("dt", f"Time step must be non-negative, got {dt}")
    u0 = state.interior(state.q).copy()
    with _operator_scope(grid, bc, cfg, operator) as L:
        s1 = finish_stage(_with_interior(state, u0 + dt * L(state)), grid, bc, cfg, 1, stats)
        u1 = s1.interior(s1.q)
        s2 = finish_stage(_with_interior(state, 0.75 * u0 + 0.25 * (u1 + dt * L(s1))), grid, bc, cfg, 2, stats)
        u2 = s2.interior(s2.q)
        return finish_stage(_with_interior(state, u0 / 3.0 + 2.0 / 3.0 * (u2 + dt * L(s2))), grid, bc, cfg, 3, stats)


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))


def advance_to(state: StateField, grid: Grid, bc: BoundarySpec, cfg: SchemeConfig, t_end: float,
               observers: Sequence[Observer] = (), operator: Optional[Operator] = None,
               t0: float = 0.0) -> Tuple[StateField, List[StepRecord]]:
    """
    t0 anından t_end anına ilerler, t_end ve gözlemci zamanlarına tam olarak iner

    Args:
        state: Başlangıç alanı
        grid: Grid
        bc: Sınır koşulları
        cfg: Şema yapılandırması
        t_end: Bitiş zamanı
        observers: Ölçerler, anlık görüntü yazıcıları, kontrol noktaları
        operator: Sağ tarafın yerine geçen operatör (opsiyonel)
        t0: Başlangıç zamanı

    Returns:
        (son alan, adım kaydı)

    Raises:
        TimeStepError: Adım bütçesi tükendi veya tüm hücreler kuru
        StabilityError: Sonlu olmayan değerler
    """
    if t_end < t0:
        raise ValidationError("t_end", f"t_end {t_end} precedes the start time {t0}")
    state = fill_ghosts(state.copy(), grid, bc)
    with _operator_scope(grid, bc, cfg, operator) as L:
        stats = StepStats()

        every_step = [obs for obs in observers if getattr(obs, "times", None) is None]
        scheduled = [(obs, sorted(float(t) for t in obs.times)) for obs in observers
                     if getattr(obs, "times", None) is not None]
        stops = sorted({t for _, times in scheduled for t in times
                        if t0 < t < t_end and not _close(t, t_end)})

        def notify(t: float) -> None:
            for obs in every_step:
                obs(t, state)
            for obs, times in scheduled:
                if any(_close(t, s) for s in times):
                    obs(t, state)

        notify(t0)
        log: List[StepRecord] = []
        t = t0
        step = 0
        logger.info("Advancing %dx%d %s field from t=%g to t=%g", grid.nx, grid.ny,
                    grid.geometry.value, t0, t_end)
        while t < t_end and not _close(t, t_end):
            if step >= cfg.max_steps:
                raise TimeStepError(f"Step budget of {cfg.max_steps} exhausted at t={t}")
            dt = stable_dt(state, grid, cfg)
            target = next((s for s in stops if s > t and not _close(s, t)), t_end)
            landing = t + dt >= target or _close(t + dt, target)
            if landing:
                dt = target - t
            clamps_before = stats.clamps
            state = ssp_rk3_step(state, grid, bc, cfg, dt, L, stats)
            t = target if landing else t + dt
            step += 1
            record = StepRecord(step, t, dt, state.total_volume(grid), stats.clamps - clamps_before)
            log.append(record)
            logger.debug("step %d t=%.6g dt=%.3e volume=%.15g clamps=%d",
                         step, t, dt, record.volume, record.clamps)
            notify(t)

        logger.info("Reached t=%g after %d steps (%d clamp events)", t, step, stats.clamps)
        return state, log


def advance_steps(state: StateField, grid: Grid, bc: BoundarySpec, cfg: SchemeConfig, nsteps: int,
                  operator: Optional[Operator] = None) -> Tuple[StateField, List[StepRecord]]:
    """Sabit sayıda CFL sınırlı adım atar"""
    if nsteps < 0:
        raise ValidationError("nsteps", "Step count must be non-negative")
    state = fill_ghosts(state.copy(), grid, bc)
    with _operator_scope(grid, bc, cfg, operator) as L:
        stats = StepStats()
        log: List[StepRecord] = []
        t = 0.0
        for step in range(1, nsteps + 1):
            dt = stable_dt(state, grid, cfg)
            clamps_before = stats.clamps
            state = ssp_rk3_step(state, grid, bc, cfg, dt, L, stats)
            t += dt
            log.append(StepRecord(step, t, dt, state.total_volume(grid), stats.clamps - clamps_before))
        return state, log
