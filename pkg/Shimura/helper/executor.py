import asyncio
from concurrent.futures import ThreadPoolExecutor
from functools import partial

from Shimura.config import Verify

executor = ThreadPoolExecutor(max_workers=Verify.WORKERS)
WORKERS = Verify.WORKERS


def resize(workers: int):
    global executor, WORKERS
    if WORKERS != workers:
        executor.shutdown(wait=True)
        executor = ThreadPoolExecutor(max_workers=workers)
        WORKERS = workers


async def run_blocking(func, *args, **kwargs):
    loop = asyncio.get_running_loop()
    return await loop.run_in_executor(executor, partial(func, *args, **kwargs))


def map_ordered(func, items):
    """Apply func over partitions on a private pool; results come back in input order."""
    items = list(items)
    if WORKERS == 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=WORKERS) as pool:
        return list(pool.map(func, items))
