# CSV çıktıları (anlık görüntüler, ölçer serileri, yakınsama tabloları, adım kayıtları) ve çalıştırma gözlemcileri

import csv
import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.grid import Grid, StateField
from exceptions.errors import FileError, OutputError, ValidationError
from scenarios.sampling import locate_cell, surface_at
from solver.time_stepping import StepRecord

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SNAPSHOT_COLUMNS = ("x", "y", "h", "qx", "qy", "eta", "H")
TABLE_COLUMNS = ("N", "err_h", "rate_h", "err_qx", "rate_qx", "err_qy", "rate_qy")
STEP_COLUMNS = ("step", "time", "dt", "volume", "clamps")


def _fmt(value: Optional[float]) -> str:
    """Geri dönüşümlü en kısa ondalık gösterim; eksik değerler için boş"""
    if value is None:
        return ""
    return repr(float(value))


def _write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise OutputError(str(path), f"Cannot write {path}: {e}")
    return path


def snapshot_columns(state: StateField, grid: Grid) -> Dict[str, np.ndarray]:
    """
    Hücre başına çıktı sütunları, x-öncelikli

    Küresel değerler satırın σ̄ değerine bölünür, böylece h, qx, qy ve H
    fiziksel büyüklüklerdir; koordinatlar derece cinsindendir.
    """
    sb = state.sigma_bar[grid.halo:grid.halo + grid.ny][None, :]
    h = state.water / sb
    qx, qy = state.momenta / sb
    H = state.interior(state.bottom) / sb
    X, Y = np.meshgrid(grid.to_output(grid.x_centers()), grid.to_output(grid.y_centers()), indexing="ij")
    return {"x": X, "y": Y, "h": h, "qx": qx, "qy": qy, "eta": h - H, "H": H}


def write_snapshot(state: StateField, grid: Grid, time: float, path: PathLike) -> Path:
    """
    x,y,h,qx,qy,eta,H başlığıyla her iç hücre için bir satır yazar

    Raises:
        OutputError: G/Ç hatası
    """
    columns = snapshot_columns(state, grid)
    flat = [columns[c].ravel() for c in SNAPSHOT_COLUMNS]
    rows = ([_fmt(v) for v in row] for row in zip(*flat))
    out = _write_rows(path, SNAPSHOT_COLUMNS, rows)
    logger.info("Wrote snapshot t=%g to %s", time, out)
    return out


def read_csv_columns(path: PathLike) -> Dict[str, np.ndarray]:
    """Bu modülün yazdığı sayısal CSV dosyasını isimli sütunlara okur"""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader)
            rows = [row for row in reader if row]
    except (OSError, StopIteration) as e:
        raise FileError(str(path), f"Cannot read {path}: {e}")
    data = np.array([[float(v) if v else np.nan for v in row] for row in rows], dtype=float)
    data = data.reshape(len(rows), len(header))
    return {name: data[:, k] for k, name in enumerate(header)}


def read_snapshot(path: PathLike) -> Dict[str, np.ndarray]:
    columns = read_csv_columns(path)
    missing = [c for c in SNAPSHOT_COLUMNS if c not in columns]
    if missing:
        raise FileError(str(path), f"Snapshot is missing columns: {', '.join(missing)}")
    return columns


@dataclass
class GaugeSeries:
    """Sabit bir konumdaki serbest yüzey zaman serisi"""
    location: Tuple[float, float]
    times: List[float] = field(default_factory=list)
    values: List[float] = field(default_factory=list)

    def append(self, time: float, value: float) -> None:
        if self.times and time <= self.times[-1]:
            raise ValidationError("time", f"Gauge times must increase: {time} after {self.times[-1]}")
        self.times.append(float(time))
        self.values.append(float(value))

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.times), np.asarray(self.values)


def write_gauges(series: GaugeSeries, path: PathLike) -> Path:
    """t,eta satırlarını yazar"""
    out = _write_rows(path, ("t", "eta"), ([_fmt(t), _fmt(v)] for t, v in zip(series.times, series.values)))
    logger.info("Wrote %d gauge samples at %s to %s", len(series.times), series.location, out)
    return out


def read_gauges(path: PathLike, location: Tuple[float, float] = (0.0, 0.0)) -> GaugeSeries:
    columns = read_csv_columns(path)
    return GaugeSeries(location, list(columns["t"]), list(columns["eta"]))


@dataclass
class ConvergenceRow:
    """İyileştirme çalışmasında tek gridin hataları; ilk satırda oranlar None"""
    n: int
    errors: Tuple[float, float, float]
    rates: Tuple[Optional[float], Optional[float], Optional[float]] = (None, None, None)


def write_table(rows: Sequence[ConvergenceRow], path: PathLike) -> Path:
    """N,err_h,rate_h,err_qx,rate_qx,err_qy,rate_qy satırlarını yazar"""
    def cells(row: ConvergenceRow) -> List[str]:
        out = [str(row.n)]
        for err, rate in zip(row.errors, row.rates):
            out += [_fmt(err), _fmt(rate)]
        return out

    out = _write_rows(path, TABLE_COLUMNS, (cells(r) for r in rows))
    logger.info("Wrote convergence table to %s", out)
    return out


def write_steps(log: Sequence[StepRecord], path: PathLike) -> Path:
    """Adım kaydını yazar: step,time,dt,volume,clamps"""
    return _write_rows(path, STEP_COLUMNS,
                       ([str(r.step), _fmt(r.time), _fmt(r.dt), _fmt(r.volume), str(r.clamps)] for r in log))


# advance_to fonksiyonuna verilen gözlemciler

class GaugeRecorder:
    """Her adımdan sonra sabit noktalarda serbest yüzeyi örnekler"""

    times = None

    def __init__(self, grid: Grid, locations: Sequence[Tuple[float, float]]):
        self.cells = [locate_cell(grid, x, y) for x, y in locations]
        self.series = [GaugeSeries((float(x), float(y))) for x, y in locations]
        self.grid = grid
        self._lock = threading.Lock()

    def __call__(self, time: float, state: StateField) -> None:
        with self._lock:
            for cell, series in zip(self.cells, self.series):
                series.append(time, surface_at(state, self.grid, cell))

    def write(self, directory: PathLike, prefix: str = "gauge") -> List[Path]:
        with self._lock:
            return [write_gauges(s, Path(directory) / f"{prefix}_{k}.csv") for k, s in enumerate(self.series)]


class SnapshotWriter:
    """Listelenen her zamanda anlık görüntü CSV dosyası yazar"""

    def __init__(self, grid: Grid, directory: PathLike, times: Sequence[float], prefix: str = "snapshot"):
        self.grid = grid
        self.directory = Path(directory)
        self.times = tuple(float(t) for t in times)
        self.prefix = prefix
        self.written: List[Path] = []
        self._lock = threading.Lock()

    def path_for(self, time: float) -> Path:
        return self.directory / f"{self.prefix}_t{time:.6g}.csv"

    def __call__(self, time: float, state: StateField) -> None:
        with self._lock:
            self.written.append(write_snapshot(state, self.grid, time, self.path_for(time)))


class CheckpointRecorder:
    """Listelenen zamanlarda alanın kopyalarını tutar"""

    def __init__(self, times: Sequence[float]):
        self.times = tuple(float(t) for t in times)
        self.states: Dict[float, StateField] = {}
        self._lock = threading.Lock()

    def __call__(self, time: float, state: StateField) -> None:
        with self._lock:
            self.states[time] = state.copy()

    def at(self, time: float) -> StateField:
        """Verilen zamanda (veya yuvarlama hatası içinde) kaydedilen kontrol noktası"""
        for t, state in self.states.items():
            if abs(t - time) <= 1e-9 * max(1.0, abs(time)):
                return state
        raise ValidationError("time", f"No checkpoint recorded at t={time}")
