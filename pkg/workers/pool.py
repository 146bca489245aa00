"""
Spike Forecaster - Bounded Worker Pool

Runs independent units of work (days, day pairs, trial batches) on a
process pool capped at `jobs` workers. Results come back in input order,
so parallel and serial runs are interchangeable.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

import structlog

T = TypeVar("T")
R = TypeVar("R")

logger = structlog.get_logger(__name__)


def run_bounded(func: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """
    Apply func to every item with at most `jobs` worker processes.

    func and items must be picklable when jobs > 1. With jobs <= 1 (or a
    single item) everything runs inline in this process.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    workers = min(jobs, len(items))
    logger.debug("Starting worker pool", workers=workers, items=len(items))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
