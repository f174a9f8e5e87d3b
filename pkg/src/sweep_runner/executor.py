"""
Sweep Executor Module

Runs independent CPU-bound work items on a thread pool from an asyncio
loop, bounding concurrency with a semaphore. Results are keyed by task id
so the completion order never affects the output order.
"""

import asyncio
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Optional

logger = logging.getLogger(__name__)


@dataclass
class SweepTask:
    """A single unit of work in a sweep."""
    task_id: Hashable
    func: Callable[..., Any]
    args: tuple = ()
    kwargs: Dict[str, Any] = field(default_factory=dict)
    result: Any = None
    completed: bool = False


class SweepExecutor:
    """
    Executes sweep tasks concurrently on a bounded thread pool.
    """

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or os.cpu_count() or 1
        self.tasks: Dict[Hashable, SweepTask] = {}
        self.results: Dict[Hashable, Any] = {}

    def add_task(
        self,
        task_id: Hashable,
        func: Callable[..., Any],
        args: tuple = None,
        kwargs: Dict[str, Any] = None,
    ) -> None:
        """
        Add a task to the sweep.

        Args:
            task_id: Unique identifier, also the key of the result
            func: Synchronous callable doing the work
            args: Positional arguments for func
            kwargs: Keyword arguments for func
        """
        if task_id in self.tasks:
            raise ValueError(f"Duplicate task id: {task_id!r}")
        self.tasks[task_id] = SweepTask(
            task_id=task_id,
            func=func,
            args=args or (),
            kwargs=kwargs or {},
        )

    async def _execute_task(
        self, task: SweepTask, pool: ThreadPoolExecutor, semaphore: asyncio.Semaphore
    ) -> Any:
        """Run one task in the pool and store its result."""
        loop = asyncio.get_running_loop()
        async with semaphore:
            logger.debug(f"Executing task: {task.task_id}")
            try:
                result = await loop.run_in_executor(pool, lambda: task.func(*task.args, **task.kwargs))
            except Exception as e:
                logger.error(f"Error executing task {task.task_id}: {str(e)}")
                raise
        task.result = result
        task.completed = True
        self.results[task.task_id] = result
        return result

    async def execute(self, max_concurrent: Optional[int] = None) -> Dict[Hashable, Any]:
        """
        Execute all pending tasks.

        Args:
            max_concurrent: Maximum number of tasks in flight; defaults to max_workers

        Returns:
            Dictionary mapping task ids to results, in insertion order
        """
        limit = max_concurrent or self.max_workers
        semaphore = asyncio.Semaphore(limit)
        pending = [task for task in self.tasks.values() if not task.completed]
        logger.info(f"Running {len(pending)} tasks on {self.max_workers} workers")

        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            await asyncio.gather(*(self._execute_task(task, pool, semaphore) for task in pending))

        return {task_id: self.results[task_id] for task_id in self.tasks}
