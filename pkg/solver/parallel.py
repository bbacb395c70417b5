# Hücre bazlı çekirdekler için sütun bloğu dağıtımı

import logging
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

from exceptions.errors import ValidationError

logger = logging.getLogger(__name__)

Block = Tuple[int, int]


def column_blocks(nx: int, nblocks: int) -> List[Block]:
    """0..nx aralığını bitişik [i0, i1) bloklarına böler"""
    nblocks = max(1, min(nblocks, nx))
    bounds = [round(k * nx / nblocks) for k in range(nblocks + 1)]
    return [(bounds[k], bounds[k + 1]) for k in range(nblocks) if bounds[k + 1] > bounds[k]]


class BlockExecutor:
    """Çekirdeği ayrık sütun blokları üzerinde seri veya thread havuzunda çalıştırır"""

    def __init__(self, threads: int = 0, cells_per_block: int = 65536):
        """
        BlockExecutor'ı başlatır

        Args:
            threads: Worker sayısı; 0 CPU sayısını seçer, 1 aynı thread içinde çalışır
            cells_per_block: Hücre cinsinden hedef blok boyutu

        Raises:
            ValidationError: Negatif thread sayısı
        """
        if threads < 0:
            raise ValidationError("threads", "Thread count must be non-negative")
        self.threads = threads or (os.cpu_count() or 1)
        self.cells_per_block = cells_per_block
        self._pool: Optional[ThreadPoolExecutor] = None
        self._lock = threading.Lock()

    def blocks(self, nx: int, ny: int) -> List[Block]:
        by_size = max(1, (nx * ny) // self.cells_per_block)
        return column_blocks(nx, max(by_size, self.threads if self.threads > 1 else 1))

    def run(self, kernel: Callable[[int, int], None], nx: int, ny: int) -> None:
        """Her blok için kernel(i0, i1) çağırır; çekirdekler ayrık dilimlere yazar"""
        blocks = self.blocks(nx, ny)
        if self.threads == 1 or len(blocks) == 1:
            for i0, i1 in blocks:
                kernel(i0, i1)
            return
        with self._lock:
            if self._pool is None:
                self._pool = ThreadPoolExecutor(max_workers=self.threads, thread_name_prefix="cweno")
        futures = [self._pool.submit(kernel, i0, i1) for i0, i1 in blocks]
        for future in futures:
            future.result()

    def shutdown(self) -> None:
        with self._lock:
            if self._pool is not None:
                self._pool.shutdown(wait=True)
                self._pool = None

    def __enter__(self) -> "BlockExecutor":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.shutdown()
