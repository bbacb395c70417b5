# Simulation - yapılandırılmış çalıştırmalar için tek giriş noktası
# RunConfig üzerinden grid, senaryo, operatör ve executor oluşturur ve bunları yürütür.

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from core.grid import Grid, StateField, build_grid
from exceptions.errors import ScenarioError, SolverError, ValidationError
from fileio.config_parser import RunConfig, load_config
from scenarios.benchmarks import InitContext, Scenario
from scenarios.norms import l1_error
from solver.parallel import BlockExecutor
from solver.scheme import SemidiscreteOperator, stable_dt
from solver.time_stepping import Observer, StepRecord, StepStats, advance_to, ssp_rk3_step

logger = logging.getLogger(__name__)


class Simulation:
    """Yapılandırılmış sığ su çalıştırması"""

    def __init__(self, config: RunConfig, executor: Optional[BlockExecutor] = None):
        """
        Grid, başlangıç alanı ve operatörü başlatır

        Args:
            config: Ayrıştırılmış çalıştırma yapılandırması
            executor: Paylaşılan blok executor (opsiyonel)

        Raises:
            ValidationError: Eksik yapılandırma
            SolverError: Senaryo veya grid oluşturma hatası
        """
        if config is None:
            raise ValidationError("config", "Run configuration is required")
        self.config = config
        try:
            self.scenario: Scenario = config.build_scenario()
            self.grid: Grid = build_grid(config.grid, config.bc)
            self.bc = config.bc
            self.scheme = config.scheme
            self.context = InitContext(config.scheme.g, config.scheme.quad_vol,
                                       config.scenario.seed, config.raster)
            self._owns_executor = executor is None
            self.executor = executor or BlockExecutor(config.scheme.threads)
            self.operator = SemidiscreteOperator(self.grid, self.bc, self.scheme, self.executor)
            self.state: StateField = self.scenario.initial_state(self.grid, self.bc, self.context)
        except SolverError:
            raise
        except Exception as e:
            raise SolverError(f"Failed to initialise simulation: {e}", "INITIALIZATION_ERROR")
        self.time = 0.0
        self.log: List[StepRecord] = []
        self._initial_volume = self.state.total_volume(self.grid)
        logger.info("Simulation ready: scenario=%s variant=%s grid=%dx%d", self.scenario.name,
                    self.scheme.variant.value, self.grid.nx, self.grid.ny)

    @classmethod
    def from_config(cls, path: Optional[Union[str, Path]], overrides: Iterable[str] = ()) -> "Simulation":
        return cls(load_config(path, overrides))

    def __enter__(self) -> "Simulation":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        if self._owns_executor:
            self.executor.shutdown()

    @property
    def initial_volume(self) -> float:
        return self._initial_volume

    def step(self, nsteps: int = 1) -> List[StepRecord]:
        """
        Mevcut zamandan itibaren CFL sınırlı adımlar atar

        Raises:
            ValidationError: Negatif adım sayısı
        """
        if nsteps < 0:
            raise ValidationError("nsteps", "Step count must be non-negative")
        stats = StepStats()
        records = []
        for _ in range(nsteps):
            dt = stable_dt(self.state, self.grid, self.scheme)
            before = stats.clamps
            self.state = ssp_rk3_step(self.state, self.grid, self.bc, self.scheme, dt, self.operator, stats)
            self.time += dt
            step = (self.log[-1].step if self.log else 0) + 1
            record = StepRecord(step, self.time, dt, self.state.total_volume(self.grid), stats.clamps - before)
            self.log.append(record)
            records.append(record)
        return records

    def run(self, t_end: Optional[float] = None, observers: Sequence[Observer] = ()) -> List[StepRecord]:
        """
        t_end anına ilerler (varsayılan: yapılandırılmış bitiş zamanı)

        Returns:
            Bu çağrının adım kayıtları
        """
        t_end = self.scheme.end_time if t_end is None else t_end
        offset = self.log[-1].step if self.log else 0
        self.state, records = advance_to(self.state, self.grid, self.bc, self.scheme, t_end,
                                         observers, self.operator, t0=self.time)
        for record in records:
            record.step += offset
        self.log.extend(records)
        if records:
            self.time = records[-1].time
        return records

    def exact(self, t: Optional[float] = None) -> StateField:
        """
        t anındaki tam çözüm (varsayılan: mevcut zaman)

        Raises:
            ScenarioError: Senaryonun tam çözümü yok
        """
        if not self.scenario.has_exact:
            raise ScenarioError(self.scenario.name, f"Scenario {self.scenario.name} has no exact solution")
        return self.scenario.exact_state(self.grid, self.bc, self.time if t is None else t, self.context)

    def errors(self) -> Tuple[float, float, float]:
        """Mevcut zamanda tam çözüme göre (h, qx, qy) L¹ hataları"""
        reference = self.exact()
        return tuple(l1_error(self.state, reference, self.grid, c) for c in range(3))
