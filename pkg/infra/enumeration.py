# infra/enumeration.py
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from core.config import DEFAULT_WORKERS
from core.equations import BlockRunner, sequential_runner
from core.validators import validate_workers

T = TypeVar("T")

# Configure logging
logger = logging.getLogger(__name__)


class BlockSearch:
    """Runs search blocks on a thread pool and keeps results in block order.

    Once block ``b`` reports a hit, blocks after ``b`` that have not started
    are skipped; the lowest hit is the answer regardless of scheduling.
    """

    def __init__(
        self,
        workers: int = DEFAULT_WORKERS,
        on_progress: Optional[Callable[[int, int], None]] = None,
    ):
        ok, msg = validate_workers(workers)
        if not ok:
            raise ValueError(msg)
        self._workers = workers
        self._on_progress = on_progress
        self._lock = threading.Lock()
        self._best: Optional[int] = None
        self._done = 0
        self._cancelled = False

    def cancel(self) -> None:
        """Skip every block of the current run that has not started yet."""
        self._cancelled = True

    def _skip(self, block: int) -> bool:
        with self._lock:
            return self._cancelled or (self._best is not None and block > self._best)

    def _record(self, block: int, hit: bool, total: int) -> None:
        with self._lock:
            if hit and (self._best is None or block < self._best):
                self._best = block
            self._done += 1
            done = self._done
        if self._on_progress:
            self._on_progress(done, total)
        logger.debug(f"Block {block} finished ({done}/{total}), hit={hit}")

    def __call__(
        self, fn: Callable[[int], Optional[T]], blocks: Sequence[int]
    ) -> List[Optional[T]]:
        blocks = list(blocks)
        total = len(blocks)
        with self._lock:
            self._best, self._done, self._cancelled = None, 0, False

        def run_block(block: int) -> Optional[T]:
            if self._skip(block):
                return None
            result = fn(block)
            self._record(block, result is not None, total)
            return result

        if self._workers == 1:
            return [run_block(b) for b in blocks]
        logger.info(f"Searching {total} blocks on {self._workers} threads")
        with ThreadPoolExecutor(max_workers=self._workers) as pool:
            return list(pool.map(run_block, blocks))


def make_runner(workers: int = DEFAULT_WORKERS) -> BlockRunner:
    """Runner for ``solve_in``; a single worker runs inline."""
    if workers == 1:
        return sequential_runner
    return BlockSearch(workers)
