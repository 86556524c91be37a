"""
Deterministic parallel map
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from potentia.config import settings

T = TypeVar("T")
R = TypeVar("R")

_workers: Optional[int] = None


def set_workers(n: Optional[int]) -> None:
    """Cap worker threads for this process (the --threads flag)."""
    global _workers
    _workers = n if n and n > 0 else None


def worker_count() -> int:
    return _workers or settings.WORKERS


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """Map preserving input order, so results do not depend on the thread count."""
    items = list(items)
    n = min(workers or worker_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
