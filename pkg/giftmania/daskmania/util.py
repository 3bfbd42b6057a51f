import logging
import os
from typing import Any, Callable, List, Optional, Sequence

import dask.bag

from giftmania.errors import ConfigError, StudyHealthError

logger = logging.getLogger(__name__)

WORKERS_ENV = 'GIFTMANIA_WORKERS'

# largest share of failed runs or cells a study may contain
FAILURE_BUDGET = 0.01


def resolve_workers(workers: Optional[int] = None) -> int:
    """
    API to pick the worker count: the explicit value, else the GIFTMANIA_WORKERS environment variable, else
    the number of CPUs.

    Examples:
        >>> resolve_workers(3)
        3
        >>> resolve_workers(0)
        Traceback (most recent call last):
            ...
        giftmania.errors.ConfigError: workers: must be a positive integer
    """
    if workers is None:
        value = os.environ.get(WORKERS_ENV)
        if value is None:
            return os.cpu_count() or 1
        try:
            workers = int(value)
        except ValueError:
            raise ConfigError(WORKERS_ENV, f'{value!r} is not an integer')
    if workers < 1:
        raise ConfigError('workers', 'must be a positive integer')
    return int(workers)


def parallel_map(func: Callable[[Any], Any], items: Sequence[Any], workers: Optional[int] = None,
                 scheduler: Optional[str] = None) -> List[Any]:
    """
    API to apply `func` to independent work items on a bounded local worker pool with dask.bag.
    Results come back in submission order whatever the scheduling order was.

    Args:
        func: picklable module-level function
        items: work items
        workers: worker count, resolved with `resolve_workers`
        scheduler: dask scheduler name; `processes` when several workers are available, else `sync`
    Examples:
        >>> parallel_map(abs, [-1, 2, -3], workers=1)
        [1, 2, 3]
    """
    items = list(items)
    if not items:
        return []
    workers = resolve_workers(workers)
    if scheduler is None:
        scheduler = 'processes' if workers > 1 and len(items) > 1 else 'sync'
    partitions = min(len(items), workers * 4)
    logger.debug('mapping %s over %d items with %d %s workers', getattr(func, '__name__', func), len(items),
                 workers, scheduler)
    bag = dask.bag.from_sequence(items, npartitions=partitions)
    return list(bag.map(func).compute(scheduler=scheduler, num_workers=workers))


def enforce_failure_budget(failed: int, total: int, what: str):
    """
    API to stop a study whose failed share exceeds the 1% budget.

    Examples:
        >>> enforce_failure_budget(1, 100, 'runs')
        >>> enforce_failure_budget(2, 100, 'runs')
        Traceback (most recent call last):
            ...
        giftmania.errors.StudyHealthError: 2 of 100 runs failed, more than 1% allowed
    """
    if failed:
        logger.warning('%d of %d %s failed', failed, total, what)
    if total and failed / total > FAILURE_BUDGET:
        raise StudyHealthError(f'{failed} of {total} {what} failed, more than {FAILURE_BUDGET:.0%} allowed')
