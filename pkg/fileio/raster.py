# ESRI ASCII grid okuma ve batimetrinin bilineer yeniden örneklenmesi

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Optional, Union

import numpy as np

from exceptions.errors import FileError, RasterFormatError, ValidationError

logger = logging.getLogger(__name__)

HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")
CENTER_KEYS = {"xllcenter": "xllcorner", "yllcenter": "yllcorner"}


class NodataPolicy(Enum):
    """Nodata raster hücrelerinin nasıl doldurulacağı"""
    LAND = "land"
    MEAN = "mean"


@dataclass
class RasterConfig:
    """
    Çalıştırma yapılandırmasının raster bölümü

    positive_down: değerler yükseklik değil derinliktir (datumun altında pozitif)
    land_elevation: land politikasında nodata hücrelerine atanan yükseklik
    """
    path: Optional[str] = None
    positive_down: bool = True
    nodata_policy: NodataPolicy = NodataPolicy.LAND
    land_elevation: float = 10.0

    def __post_init__(self):
        if not isinstance(self.nodata_policy, NodataPolicy):
            try:
                self.nodata_policy = NodataPolicy(str(self.nodata_policy).lower())
            except ValueError:
                raise ValidationError("nodata_policy", f"Unknown nodata policy: {self.nodata_policy}")


@dataclass
class RasterGrid:
    """
    Ayrıştırılmış raster

    values boyutu (nrows, ncols), 0. satır en güneydeki satırdır;
    nodata girdileri NaN olur.
    """
    ncols: int
    nrows: int
    xllcorner: float
    yllcorner: float
    cellsize: float
    nodata_value: Optional[float]
    values: np.ndarray

    def __post_init__(self):
        if self.cellsize <= 0:
            raise ValidationError("cellsize", "Raster cell size must be positive")
        if self.values.shape != (self.nrows, self.ncols):
            raise ValidationError("values", f"Expected {self.nrows}x{self.ncols} values, got {self.values.shape}")

    @property
    def node_x(self) -> np.ndarray:
        return self.xllcorner + (np.arange(self.ncols) + 0.5) * self.cellsize

    @property
    def node_y(self) -> np.ndarray:
        return self.yllcorner + (np.arange(self.nrows) + 0.5) * self.cellsize

    def filled(self, policy: NodataPolicy = NodataPolicy.LAND, land_value: float = 0.0) -> "RasterGrid":
        """Nodata hücreleri politikaya göre değiştirilmiş kopya döndürür"""
        missing = np.isnan(self.values)
        if not missing.any():
            return self
        fill = land_value if policy is NodataPolicy.LAND else float(np.nanmean(self.values))
        logger.warning("Replacing %d nodata raster cells with %g (%s policy)",
                       int(missing.sum()), fill, policy.value)
        values = np.where(missing, fill, self.values)
        return RasterGrid(self.ncols, self.nrows, self.xllcorner, self.yllcorner,
                          self.cellsize, self.nodata_value, values)

    def interpolate(self, x, y) -> np.ndarray:
        """
        Hücre merkezi düğümleri arasında bilineer interpolasyon

        Düğüm zarfının dışındaki noktalar en yakın düğüm satırına/sütununa kırpılır.
        Eşit komşu düğümler değerlerini tam olarak verir.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        fx = np.clip((x - self.xllcorner) / self.cellsize - 0.5, 0.0, self.ncols - 1)
        fy = np.clip((y - self.yllcorner) / self.cellsize - 0.5, 0.0, self.nrows - 1)
        i0 = np.minimum(np.floor(fx).astype(int), max(self.ncols - 2, 0))
        j0 = np.minimum(np.floor(fy).astype(int), max(self.nrows - 2, 0))
        i1 = np.minimum(i0 + 1, self.ncols - 1)
        j1 = np.minimum(j0 + 1, self.nrows - 1)
        tx = fx - i0
        ty = fy - j0
        v = self.values
        south = v[j0, i0] + tx * (v[j0, i1] - v[j0, i0])
        north = v[j1, i0] + tx * (v[j1, i1] - v[j1, i0])
        return south + ty * (north - south)


def parse_raster(text: str, source: str = "<string>") -> RasterGrid:
    """
    ESRI ASCII grid metnini ayrıştırır

    Args:
        text: Dosya içeriği
        source: Hata mesajlarında kullanılan ad

    Returns:
        RasterGrid

    Raises:
        RasterFormatError: Bozuk başlık, sayı uyuşmazlığı veya tamamen nodata veri
    """
    lines = text.splitlines()
    header: Dict[str, float] = {}
    lineno = 0
    while lineno < len(lines):
        parts = lines[lineno].split()
        if not parts:
            lineno += 1
            continue
        key = parts[0].lower()
        if key[0].isdigit() or key[0] in "+-.":
            break
        key = CENTER_KEYS.get(key, key)
        if key not in HEADER_KEYS or len(parts) != 2:
            raise RasterFormatError(source, f"Malformed header entry '{lines[lineno].strip()}'", lineno + 1)
        try:
            value = float(parts[1])
        except ValueError:
            raise RasterFormatError(source, f"Header value for {key} is not a number", lineno + 1)
        if parts[0].lower() in CENTER_KEYS:
            header[f"_{key}_center"] = 1.0
        header[key] = value
        lineno += 1

    for key in HEADER_KEYS[:5]:
        if key not in header:
            raise RasterFormatError(source, f"Missing header key {key.upper()}", lineno + 1)

    ncols, nrows = int(header["ncols"]), int(header["nrows"])
    cellsize = header["cellsize"]
    if ncols < 1 or nrows < 1 or cellsize <= 0:
        raise RasterFormatError(source, "NCOLS, NROWS and CELLSIZE must be positive", None)
    xll, yll = header["xllcorner"], header["yllcorner"]
    if "_xllcorner_center" in header:
        xll -= 0.5 * cellsize
    if "_yllcorner_center" in header:
        yll -= 0.5 * cellsize

    tokens = " ".join(lines[lineno:]).split()
    if len(tokens) != ncols * nrows:
        raise RasterFormatError(source, f"Expected {ncols * nrows} values, found {len(tokens)}", lineno + 1)
    try:
        data = np.array(tokens, dtype=float).reshape(nrows, ncols)
    except ValueError as e:
        raise RasterFormatError(source, f"Non-numeric raster value: {e}", lineno + 1)

    nodata = header.get("nodata_value")
    if nodata is not None:
        data[data == nodata] = np.nan
    if np.isnan(data).all():
        raise RasterFormatError(source, "Raster contains only nodata values", None)

    # kuzeyden güneye saklanır
    return RasterGrid(ncols, nrows, xll, yll, cellsize, nodata, data[::-1].copy())


def read_raster(path: Union[str, Path]) -> RasterGrid:
    """ESRI ASCII grid dosyasını okur"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FileError(str(path), f"Cannot read raster: {e}")
    raster = parse_raster(text, str(path))
    logger.info("Read %dx%d raster from %s", raster.ncols, raster.nrows, path)
    return raster


def depth_function(raster: RasterGrid, cfg: RasterConfig) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """
    Raster koordinatlarında H(x, y) derinliği (datumun altında pozitif)

    Nodata hücreleri önce doldurulur, interpolasyon hiç NaN görmez.
    """
    land_value = -cfg.land_elevation if cfg.positive_down else cfg.land_elevation
    filled = raster.filled(cfg.nodata_policy, land_value)
    sign = 1.0 if cfg.positive_down else -1.0

    def depth(x, y):
        return sign * filled.interpolate(x, y)

    return depth
