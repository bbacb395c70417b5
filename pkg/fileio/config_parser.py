# Satır bazlı çalıştırma yapılandırması: `section.key = value`

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple, Union

from core.grid import BoundarySpec, GridConfig
from core.reconstruction import Variant
from exceptions.errors import ConfigurationError, FileError, SolverError, ValidationError
from fileio.raster import RasterConfig
from scenarios.benchmarks import DEFAULT_PARAMS, Scenario, get_scenario
from solver.scheme import SchemeConfig

logger = logging.getLogger(__name__)

SECTIONS = ("grid", "bc", "scheme", "scenario", "raster", "output")


@dataclass
class ScenarioConfig:
    """Senaryo bölümü: kayıt adı, seed ve parametre override değerleri"""
    name: str = "vortex"
    seed: Optional[int] = None
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass
class OutputConfig:
    """
    Çıktı bölümü

    gauges çıktı birimlerinde (x, y) çiftleridir; snapshot_times son
    görüntüye ek olarak anlık görüntü yazılan anlardır.
    """
    directory: str = "output"
    snapshot_times: Tuple[float, ...] = ()
    gauges: Tuple[Tuple[float, float], ...] = ()
    write_final: bool = True
    steps_log: bool = True

    def __post_init__(self):
        if any(t < 0 for t in self.snapshot_times):
            raise ValidationError("snapshot_times", "Snapshot times must be non-negative")


@dataclass
class RunConfig:
    """Tam çalıştırma yapılandırması"""
    grid: GridConfig
    bc: BoundarySpec
    scheme: SchemeConfig
    scenario: ScenarioConfig
    raster: RasterConfig
    output: OutputConfig

    def build_scenario(self) -> Scenario:
        params = dict(self.scenario.params)
        if self.scenario.seed is not None and "seed" in DEFAULT_PARAMS[self.scenario.name]:
            params["seed"] = self.scenario.seed
        return get_scenario(self.scenario.name, params)


@dataclass
class Entry:
    section: str
    key: str
    raw: str
    line: Optional[int]

    @property
    def name(self) -> str:
        return f"{self.section}.{self.key}"


# Değer dönüştürücüler

def _to_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got '{raw}'")


def _to_float(raw: str) -> float:
    value = float(raw)
    if not math.isfinite(value):
        raise ValueError(f"expected a finite number, got '{raw.strip()}'")
    return value


def _to_int(raw: str) -> int:
    value = _to_float(raw)
    if not value.is_integer():
        raise ValueError(f"expected an integer, got '{raw}'")
    return int(value)


def _to_optional_int(raw: str) -> Optional[int]:
    return None if raw.strip().lower() in ("", "none", "auto") else _to_int(raw)


def _to_floats(raw: str) -> Tuple[float, ...]:
    return tuple(_to_float(part) for part in raw.replace(";", ",").split(",") if part.strip())


def _to_points(raw: str) -> Tuple[Tuple[float, float], ...]:
    points = []
    for part in raw.split(","):
        if not part.strip():
            continue
        coords = part.replace(":", " ").split()
        if len(coords) != 2:
            raise ValueError(f"expected 'x:y' pairs, got '{part.strip()}'")
        points.append((_to_float(coords[0]), _to_float(coords[1])))
    return tuple(points)


def _to_str(raw: str) -> str:
    return raw.strip()


Converter = Callable[[str], Any]

SCHEMA: Dict[str, Dict[str, Converter]] = {
    "grid": {
        "geometry": _to_str, "nx": _to_int, "ny": _to_int,
        "xmin": _to_float, "xmax": _to_float, "ymin": _to_float, "ymax": _to_float,
        "radius": _to_float, "resolution": _to_float,
    },
    "bc": {"west": _to_str, "east": _to_str, "south": _to_str, "north": _to_str},
    "scheme": {
        "order": _to_int, "variant": _to_str, "cfl": _to_float, "g": _to_float,
        "d0": _to_float, "dr": _to_float, "eps_law": _to_str, "eps_value": _to_float, "h_dry": _to_float,
        "vel_eps": _to_float, "h_vel": _to_float,
        "quad_edge": _to_optional_int, "quad_vol": _to_optional_int,
        "end_time": _to_float, "max_steps": _to_int, "threads": _to_int,
    },
    "raster": {
        "path": _to_str, "positive_down": _to_bool, "nodata_policy": _to_str, "land_elevation": _to_float,
    },
    "output": {
        "directory": _to_str, "snapshot_times": _to_floats, "gauges": _to_points,
        "write_final": _to_bool, "steps_log": _to_bool,
    },
}


def _split_assignment(text: str, line: Optional[int]) -> Entry:
    if "=" not in text:
        raise ConfigurationError(text.strip(), f"Expected 'section.key = value', got '{text.strip()}'", line)
    lhs, raw = text.split("=", 1)
    lhs = lhs.strip().lower()
    if "." not in lhs:
        raise ConfigurationError(lhs, f"Key '{lhs}' must be written as section.key", line)
    section, key = lhs.split(".", 1)
    if section not in SECTIONS:
        raise ConfigurationError(lhs, f"Unknown section '{section}'", line)
    if not key:
        raise ConfigurationError(lhs, "Empty key", line)
    return Entry(section, key, raw.strip(), line)


def parse_entries(text: str) -> List[Entry]:
    """Config metnini girdilere ayırır; `#` yorum başlatır"""
    entries = []
    for number, raw_line in enumerate(text.splitlines(), start=1):
        content = raw_line.split("#", 1)[0].strip()
        if content:
            entries.append(_split_assignment(content, number))
    return entries


def apply_override(assignment: str) -> Entry:
    """Tek bir `--set section.key=value` override değerini ayrıştırır"""
    return _split_assignment(assignment, None)


def _convert(entry: Entry, converter: Converter) -> Any:
    try:
        return converter(entry.raw)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(entry.name, f"Invalid value for {entry.name}: {e}", entry.line)


def _latest(entries: Iterable[Entry]) -> Dict[Tuple[str, str], Entry]:
    latest: Dict[Tuple[str, str], Entry] = {}
    for entry in entries:
        latest[(entry.section, entry.key)] = entry
    return latest


def _section(entries: List[Entry], section: str) -> Tuple[Dict[str, Any], Dict[str, Entry]]:
    values: Dict[str, Any] = {}
    sources: Dict[str, Entry] = {}
    schema = SCHEMA[section]
    for (sec, key), entry in _latest(entries).items():
        if sec != section:
            continue
        if key not in schema:
            raise ConfigurationError(entry.name, f"Unknown key '{entry.name}'", entry.line)
        values[key] = _convert(entry, schema[key])
        sources[key] = entry
    return values, sources


def _build(section: str, sources: Dict[str, Entry], factory: Callable[[], Any]) -> Any:
    try:
        return factory()
    except ValidationError as e:
        entry = sources.get(e.field)
        key = entry.name if entry else f"{section}.{e.field}"
        raise ConfigurationError(key, e.message, entry.line if entry else None)


def _variant(entries: List[Entry]) -> Tuple[Optional[Variant], Optional[Entry]]:
    """scheme.order ve scheme.variant değerlerini görünüş sırasına göre çözümler"""
    variant: Optional[Variant] = None
    source: Optional[Entry] = None
    for entry in entries:
        if entry.section != "scheme" or entry.key not in ("order", "variant"):
            continue
        try:
            if entry.key == "order":
                order = _convert(entry, _to_int)
                if variant is None or variant.order != order:
                    variant = Variant.for_order(order)
            else:
                variant = Variant(entry.raw.strip().upper().replace("/", ""))
        except ValueError:
            raise ConfigurationError(entry.name, f"Unknown variant '{entry.raw}'", entry.line)
        except ValidationError as e:
            raise ConfigurationError(entry.name, e.message, entry.line)
        source = entry
    return variant, source


def build_config(entries: List[Entry]) -> RunConfig:
    """
    Ayrıştırılmış girdilerden RunConfig oluşturur

    Senaryo varsayılanları grid, bc ve bitiş zamanını belirler; açıkça verilen anahtarlar önceliklidir.

    Raises:
        ConfigurationError: Bilinmeyen anahtar, hatalı değer veya ihlal edilen kısıt
    """
    latest = _latest(entries)

    name_entry = latest.get(("scenario", "name"))
    name = name_entry.raw.strip().lower() if name_entry else "vortex"
    if name not in DEFAULT_PARAMS:
        raise ConfigurationError("scenario.name", f"Unknown scenario '{name}'",
                                 name_entry.line if name_entry else None)
    params: Dict[str, Any] = {}
    seed: Optional[int] = None
    for (section, key), entry in latest.items():
        if section != "scenario" or key == "name":
            continue
        if key == "seed":
            seed = _convert(entry, _to_int)
            continue
        if key not in DEFAULT_PARAMS[name]:
            raise ConfigurationError(entry.name, f"Unknown key '{entry.name}' for scenario {name}", entry.line)
        params[key] = entry.raw
    for key, raw in params.items():
        try:
            get_scenario(name, {key: raw})
        except SolverError as e:
            entry = latest[("scenario", key)]
            raise ConfigurationError(entry.name, e.message, entry.line)
    scenario = get_scenario(name, params)

    grid_values, grid_sources = _section(entries, "grid")
    base = scenario.grid
    grid_fields = {k: getattr(base, k) for k in ("geometry", "nx", "ny", "xmin", "xmax", "ymin", "ymax", "radius")}
    # Açık hücre sayıları senaryonun varsayılan çözünürlüğünü ezer
    resolution = None if ("nx" in grid_values or "ny" in grid_values) else base.resolution
    grid_fields["resolution"] = resolution
    grid_fields.update(grid_values)
    grid = _build("grid", grid_sources, lambda: GridConfig(**grid_fields))

    bc_values, bc_sources = _section(entries, "bc")
    bc_fields = {side: getattr(scenario.bc, side) for side in ("west", "east", "south", "north")}
    bc_fields.update(bc_values)
    bc = _build("bc", bc_sources, lambda: BoundarySpec(**bc_fields))

    scheme_values, scheme_sources = _section(entries, "scheme")
    scheme_values.pop("order", None)
    scheme_values.pop("variant", None)
    variant, variant_source = _variant(entries)
    if variant is not None:
        scheme_values["variant"] = variant
        scheme_sources["variant"] = variant_source
    scheme_values.setdefault("end_time", scenario.end_time)
    scheme = _build("scheme", scheme_sources, lambda: SchemeConfig(**scheme_values))

    raster_values, raster_sources = _section(entries, "raster")
    raster = _build("raster", raster_sources, lambda: RasterConfig(**raster_values))

    output_values, output_sources = _section(entries, "output")
    output_values.setdefault("gauges", scenario.gauges)
    output = _build("output", output_sources, lambda: OutputConfig(**output_values))

    config = RunConfig(grid, bc, scheme, ScenarioConfig(name, seed, params), raster, output)
    logger.debug("Configuration: scenario=%s grid=%dx%d variant=%s", name, grid.nx, grid.ny, scheme.variant.value)
    return config


def parse_config(text: str, overrides: Iterable[str] = ()) -> RunConfig:
    """
    Config metnini ayrıştırır ve `section.key=value` override değerlerini uygular

    Args:
        text: Config dosyası içeriği
        overrides: Dosyadan sonra uygulanan atamalar

    Returns:
        RunConfig
    """
    entries = parse_entries(text) + [apply_override(o) for o in overrides]
    return build_config(entries)


def load_config(path: Optional[Union[str, Path]], overrides: Iterable[str] = ()) -> RunConfig:
    """
    Config dosyasını okur ve ayrıştırır; None yalnızca override değerlerini ayrıştırır

    Raises:
        FileError: Eksik, okunamayan veya UTF-8 olmayan dosya
        ConfigurationError: Geçersiz içerik
    """
    text = ""
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise FileError(str(path), f"Config file not found: {path}")
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise FileError(str(path), f"Cannot read config file {path}: {e}")
        except UnicodeDecodeError as e:
            raise FileError(str(path), f"Config file {path} is not valid UTF-8: {e}")
        logger.info("Loaded configuration from %s", path)
    return parse_config(text, overrides)
