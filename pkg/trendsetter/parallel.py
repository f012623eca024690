import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar('T')
R = TypeVar('R')

_log = logging.getLogger(__name__)


def ordered_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """Apply ``fn`` to every item, in parallel when ``jobs > 1``. Results keep the input order."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    _log.debug(f'Running {len(items)} tasks on {jobs} workers.')
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(fn, items))
