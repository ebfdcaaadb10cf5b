from typing import Any, Callable, Iterable, TypeVar

import anyio
import anyio.to_process
from loguru import logger

from hurwitz import config

T = TypeVar("T")


async def _gather(fn: Callable[[Any], T], items: list, workers: int) -> list[T]:
    results: list[Any] = [None] * len(items)
    limiter = anyio.CapacityLimiter(workers)

    async def run(index: int, item: Any) -> None:
        if workers > 1:
            results[index] = await anyio.to_process.run_sync(fn, item, limiter=limiter)
        else:
            results[index] = fn(item)

    async with anyio.create_task_group() as tg:
        for index, item in enumerate(items):
            tg.start_soon(run, index, item)
    return results


def fan_out(fn: Callable[[Any], T], items: Iterable, workers: int | None = None) -> list[T]:
    """Run `fn` over `items` and return the results in input order.

    `fn` and the items must be picklable when more than one worker is used.
    """
    items = list(items)
    workers = workers or config.WORKERS
    if workers > 1:
        logger.debug(f"Fanning out {len(items)} tasks over {workers} worker processes")
    return anyio.run(_gather, fn, items, workers)
