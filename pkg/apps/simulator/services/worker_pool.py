"""
Ordered process-pool map for independent sweep points.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def resolve_threads(threads: int) -> int:
    """0 means every hardware thread."""
    return threads if threads > 0 else (os.cpu_count() or 1)


def map_ordered(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """
    Apply ``fn`` to every item and return results in input order.

    ``fn`` must be a picklable module-level callable (or functools.partial of
    one). With one worker everything runs inline in this process.
    """
    items = list(items)
    workers = min(resolve_threads(threads), max(len(items), 1))
    if workers == 1:
        return [fn(item) for item in items]
    logger.debug(f"mapping {len(items)} work items over {workers} processes")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
