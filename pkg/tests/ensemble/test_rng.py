import numpy as np
import pytest
from lorentzgas.ensemble import BlockRunner, partition, run_blocks, substream


def test_partition_blocks() -> None:
    blocks = partition(10_000, seed=5, block_size=4096)

    assert [(b.index, b.start, b.count) for b in blocks] == [
        (0, 0, 4096),
        (1, 4096, 4096),
        (2, 8192, 1808),
    ]
    assert all(b.seed == 5 for b in blocks)


@pytest.mark.parametrize(("n_samples", "block_size"), [(0, 10), (10, 0)])
def test_partition_rejects_empty(n_samples: int, block_size: int) -> None:
    with pytest.raises(ValueError):  # noqa: PT011
        partition(n_samples, seed=0, block_size=block_size)


def test_substreams_are_reproducible_and_distinct() -> None:
    first = substream(11, 3).random(4)

    np.testing.assert_array_equal(first, substream(11, 3).random(4))
    assert not np.array_equal(first, substream(11, 4).random(4))
    assert not np.array_equal(first, substream(12, 3).random(4))
    assert not np.array_equal(
        partition(1, seed=11)[0].generator(1).random(4),
        partition(1, seed=11)[0].generator().random(4),
    )


def test_negative_seed() -> None:
    with pytest.raises(ValueError, match="nonnegative"):
        substream(-1)


@pytest.mark.parametrize("concurrency", [1, 3, 8])
async def test_runner_keeps_job_order(concurrency: int) -> None:
    def work(job: int) -> int:
        return job * job

    runner = BlockRunner(work, concurrency=concurrency)

    assert await runner.run(list(range(20))) == [i * i for i in range(20)]
    assert await runner.run([]) == []


async def test_runner_propagates_errors() -> None:
    def work(job: int) -> int:
        if job == 3:  # noqa: PLR2004
            msg = "bad block"
            raise RuntimeError(msg)
        return job

    runner = BlockRunner(work, concurrency=2)
    with pytest.raises(Exception) as exc_info:  # noqa: PT011
        await runner.run(list(range(6)))
    assert "bad block" in repr(exc_info.value)


def test_runner_rejects_nonpositive_concurrency() -> None:
    with pytest.raises(ValueError, match="Concurrency"):
        BlockRunner(abs, concurrency=-1)


def test_run_blocks_sync_wrapper() -> None:
    assert run_blocks(str, [1, 2, 3], concurrency=2) == ["1", "2", "3"]


def test_thread_count_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("LORENTZGAS_THREADS", "3")

    assert BlockRunner(abs).concurrency == 3  # noqa: PLR2004

    monkeypatch.setenv("LORENTZGAS_THREADS", "zero")
    assert BlockRunner(abs).concurrency >= 1
