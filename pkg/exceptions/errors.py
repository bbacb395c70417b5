# Çözücüye özgü hata sınıflarını içerir

from typing import Optional, Dict, Any, Tuple


class SolverError(Exception):
    """Çözücü paketinin fırlattığı tüm hatalar için temel sınıf"""

    def __init__(self, message: str, code: str = None, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.code = code
        self.details = details
        super().__init__(self.message)


class ValidationError(SolverError):
    """Genel bir işleme geçersiz argüman verildiğinde fırlatılan hata"""

    def __init__(self, field: str, message: str = None, code: str = "VALIDATION_ERROR"):
        if message is None:
            message = f"Validation error for field: {field}"
        super().__init__(message, code)
        self.field = field


class ConfigurationError(SolverError):
    """Yapılandırma hatası (config dosyası satırı veya --set override)"""

    def __init__(self, key: str, message: str = None, line: Optional[int] = None,
                 code: str = "CONFIGURATION_ERROR"):
        if message is None:
            message = f"Configuration error for key: {key}"
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, code)
        self.key = key
        self.line = line


class GridError(ValidationError):
    """Grid oluşturma hatası"""

    def __init__(self, field: str, message: str = None, code: str = "GRID_ERROR"):
        if message is None:
            message = f"Invalid grid parameter: {field}"
        super().__init__(field, message, code)


class ReconstructionError(SolverError):
    """Rekonstrüksiyon hatası (rank eksik fit, dejenere katsayılar)"""

    def __init__(self, message: str, code: str = "RECONSTRUCTION_ERROR"):
        super().__init__(message, code)


class DryStateError(SolverError):
    """Momentum taşıyan kuru bir durumda hıza bağlı terim istendiğinde fırlatılan hata"""

    def __init__(self, component: str = "flux", message: str = None, code: str = "DRY_STATE_ERROR"):
        if message is None:
            message = f"Dry state with nonzero momentum passed to {component}"
        super().__init__(message, code)
        self.component = component


class RiemannError(SolverError):
    """Riemann çözücü hatası"""

    def __init__(self, message: str = "Both sides of the edge are dry", code: str = "RIEMANN_ERROR"):
        super().__init__(message, code)


class StabilityError(SolverError):
    """Runge-Kutta aşamasında NaN/Inf oluştuğunda fırlatılan hata"""

    def __init__(self, location: Tuple[int, ...], stage: int, message: str = None,
                 code: str = "STABILITY_ERROR"):
        if message is None:
            message = f"Non-finite value at cell {location} in stage {stage}"
        super().__init__(message, code)
        self.location = location
        self.stage = stage


class TimeStepError(SolverError):
    """Zaman adımı hesaplanamadığında veya adım bütçesi tükendiğinde fırlatılan hata"""

    def __init__(self, message: str, code: str = "TIME_STEP_ERROR"):
        super().__init__(message, code)


class ScenarioError(SolverError):
    """Bilinmeyen senaryo veya eksik tam çözüm"""

    def __init__(self, name: str, message: str = None, code: str = "SCENARIO_ERROR"):
        if message is None:
            message = f"Scenario error: {name}"
        super().__init__(message, code)
        self.name = name


class FileError(SolverError):
    """Dosya işlemleri ile ilgili hatalar"""

    def __init__(self, file_path: str, message: str = None, code: str = "FILE_ERROR"):
        if message is None:
            message = f"File error: {file_path}"
        super().__init__(message, code)
        self.file_path = file_path


class RasterFormatError(FileError):
    """Bozuk ESRI ASCII raster"""

    def __init__(self, file_path: str, message: str = None, line: Optional[int] = None,
                 code: str = "RASTER_FORMAT_ERROR"):
        if message is None:
            message = f"Malformed raster: {file_path}"
        if line is not None:
            message = f"{file_path}:{line}: {message}"
        super().__init__(file_path, message, code)
        self.line = line


class OutputError(FileError):
    """Çıktı dosyası yazılırken oluşan hata"""

    def __init__(self, file_path: str, message: str = None, code: str = "OUTPUT_ERROR"):
        if message is None:
            message = f"Failed to write output: {file_path}"
        super().__init__(file_path, message, code)
