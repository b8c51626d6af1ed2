"""
Sweep Runner - Order-preserving evaluation of parameter sweeps
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from config import settings


logger = logging.getLogger(__name__)

P = TypeVar("P")
R = TypeVar("R")


def run_sweep(fn: Callable[[P], R], points: Sequence[P], workers: Optional[int] = None) -> List[R]:
    """Evaluate fn over points; results come back in input order for any worker count"""
    workers = settings.WORKERS if workers is None else int(workers)
    logger.debug("sweep of %d points on %d worker(s)", len(points), max(1, workers))
    if workers <= 1 or len(points) <= 1:
        return [fn(point) for point in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))
