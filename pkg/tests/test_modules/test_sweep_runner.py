"""Tests for the thread-pool sweep executor."""
import time

import pytest

from sweep_runner.executor import SweepExecutor


def _slow_square(x, delay):
    time.sleep(delay)
    return x * x


async def test_results_follow_insertion_order():
    executor = SweepExecutor(max_workers=4)
    for i in range(8):
        # later tasks finish first
        executor.add_task(i, _slow_square, args=(i, 0.02 * (8 - i)))
    results = await executor.execute()
    assert list(results) == list(range(8))
    assert list(results.values()) == [i * i for i in range(8)]
    assert all(task.completed for task in executor.tasks.values())


async def test_kwargs_are_forwarded():
    executor = SweepExecutor(max_workers=1)
    executor.add_task("a", _slow_square, kwargs={"x": 3, "delay": 0.0})
    assert await executor.execute() == {"a": 9}


def test_duplicate_task_id_rejected():
    executor = SweepExecutor()
    executor.add_task(0, _slow_square, args=(1, 0.0))
    with pytest.raises(ValueError):
        executor.add_task(0, _slow_square, args=(2, 0.0))
    assert executor.max_workers >= 1


async def test_task_errors_propagate():
    def fail():
        raise RuntimeError("boom")

    executor = SweepExecutor(max_workers=2)
    executor.add_task("bad", fail)
    with pytest.raises(RuntimeError):
        await executor.execute()
