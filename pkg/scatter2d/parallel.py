"""
Process-wide worker pool for sweeps over m, b and theta.

Every physics operation is pure, so sweeps are plain ordered maps. Results
come back in input order whatever the worker count.
"""

import atexit
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from scatter2d.logging_config import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_executor: Optional[ThreadPoolExecutor] = None
_executor_workers: int = 0
_executor_lock = threading.Lock()
_override: Optional[int] = None


def worker_count() -> int:
    """Number of workers: explicit override, then SCATTER2D_THREADS, then CPUs."""
    if _override is not None:
        return _override
    raw = os.getenv("SCATTER2D_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            logger.warning("Ignoring non-integer SCATTER2D_THREADS=%r", raw)
    return max(1, min(8, os.cpu_count() or 1))


def set_worker_count(n: Optional[int]) -> None:
    """Override the worker count (None restores the environment default)."""
    global _override
    _override = None if n is None else max(1, int(n))
    _shutdown_executor()


def get_executor() -> ThreadPoolExecutor:
    """Get or create the global thread pool executor."""
    global _executor, _executor_workers
    workers = worker_count()
    with _executor_lock:
        if _executor is None or _executor_workers != workers:
            if _executor is not None:
                _executor.shutdown(wait=False)
            _executor = ThreadPoolExecutor(max_workers=workers)
            _executor_workers = workers
    return _executor


def _shutdown_executor() -> None:
    global _executor
    with _executor_lock:
        if _executor is not None:
            _executor.shutdown(wait=False)
            _executor = None


atexit.register(_shutdown_executor)


_local = threading.local()


def _in_worker(fn: Callable[[T], R]) -> Callable[[T], R]:
    def run(item: T) -> R:
        _local.inside = True
        try:
            return fn(item)
        finally:
            _local.inside = False

    return run


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Apply ``fn`` to every item and return the results in input order.

    Calls made from inside a worker run serially so nested sweeps cannot
    starve the pool.
    """
    items = list(items)
    if worker_count() == 1 or len(items) < 2 or getattr(_local, "inside", False):
        return [fn(item) for item in items]
    return list(get_executor().map(_in_worker(fn), items))
