"""Bounded concurrent execution of independent jobs with ordered results."""

import asyncio
import logging
from concurrent.futures import Executor, ProcessPoolExecutor
from typing import Callable, Optional, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


def run_ordered(jobs: Sequence[Callable[[], T]], workers: int = 1) -> list[T]:
    """Run every job and return the results in job order.

    With one worker the jobs run inline. Otherwise they are submitted to a
    process pool behind a semaphore of size ``workers``; jobs must then be
    picklable (module-level functions or partials of them).
    """
    if workers <= 1 or len(jobs) <= 1:
        return [job() for job in jobs]
    return asyncio.run(_run_async(jobs, workers))


async def _run_async(jobs: Sequence[Callable[[], T]], workers: int) -> list[T]:
    results: list[Optional[T]] = [None] * len(jobs)
    sem = asyncio.Semaphore(workers)
    loop = asyncio.get_running_loop()

    with ProcessPoolExecutor(max_workers=workers) as pool:

        async def process_with_semaphore(index: int, executor: Executor):
            async with sem:
                value = await loop.run_in_executor(executor, jobs[index])
                return index, value

        tasks = [process_with_semaphore(i, pool) for i in range(len(jobs))]
        for future in asyncio.as_completed(tasks):
            index, value = await future
            results[index] = value
            logger.debug("job %d of %d finished", index + 1, len(jobs))

    return results  # type: ignore[return-value]
