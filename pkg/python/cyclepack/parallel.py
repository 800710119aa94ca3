"""
Fan-out of independent tasks over a process pool.

Results always come back in submission order, so output does not depend on
the number of workers.
"""

from __future__ import annotations

import asyncio
import functools
import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import Any, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


async def _gather(fn: Callable[..., T], calls: Sequence[tuple[Any, ...]], jobs: int) -> list[T]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [loop.run_in_executor(pool, functools.partial(fn, *args)) for args in calls]
        return list(await asyncio.gather(*futures))


def run_tasks(fn: Callable[..., T], calls: Sequence[tuple[Any, ...]], jobs: int = 1) -> list[T]:
    """Call ``fn(*args)`` for every entry of ``calls``.

    ``fn`` must be a module-level function so it can be sent to workers.
    With ``jobs == 1`` everything runs inline.
    """
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    if jobs == 1 or len(calls) <= 1:
        return [fn(*args) for args in calls]
    logger.debug("running %d tasks on %d workers", len(calls), jobs)
    return asyncio.run(_gather(fn, calls, jobs))
