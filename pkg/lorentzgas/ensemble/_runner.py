from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from typing import Generic, TypeVar

import anyio
import anyio.to_thread
from anyio.streams.memory import MemoryObjectReceiveStream

from lorentzgas._types import TResult
from lorentzgas._util import default_concurrency

TJob = TypeVar("TJob")


class BlockRunner(Generic[TJob, TResult]):
    """Runs a CPU-bound function over jobs on a pool of worker threads.

    Results come back in job order whatever the number of workers.
    """

    def __init__(
        self,
        func: Callable[[TJob], TResult],
        *,
        concurrency: int | None = None,
    ) -> None:
        self._func = func
        self._concurrency = concurrency or default_concurrency()
        if self._concurrency < 1:
            msg = f"Concurrency must be positive, got {self._concurrency}"
            raise ValueError(msg)

    @property
    def concurrency(self) -> int:
        return self._concurrency

    async def run(self, jobs: Sequence[TJob]) -> list[TResult]:
        if not jobs:
            return []
        results: dict[int, TResult] = {}
        limiter = anyio.CapacityLimiter(self._concurrency)
        workers = min(self._concurrency, len(jobs))
        logging.info("Running %s blocks on %s workers", len(jobs), workers)

        send, recv = anyio.create_memory_object_stream[tuple[int, TJob]](
            max_buffer_size=len(jobs),
        )
        async with anyio.create_task_group() as tg:
            for _ in range(workers):
                tg.start_soon(self._worker, recv.clone(), results, limiter)
            recv.close()
            async with send:
                for item in enumerate(jobs):
                    await send.send(item)

        return [results[index] for index in range(len(jobs))]

    async def _worker(
        self,
        recv: MemoryObjectReceiveStream[tuple[int, TJob]],
        results: dict[int, TResult],
        limiter: anyio.CapacityLimiter,
    ) -> None:
        async with recv:
            async for index, job in recv:
                results[index] = await anyio.to_thread.run_sync(
                    self._func,
                    job,
                    limiter=limiter,
                )


def run_blocks(
    func: Callable[[TJob], TResult],
    jobs: Sequence[TJob],
    *,
    concurrency: int | None = None,
) -> list[TResult]:
    runner = BlockRunner(func, concurrency=concurrency)
    return anyio.run(runner.run, jobs)
