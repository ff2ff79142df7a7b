"""In-process task queue: at-least-once delivery, bounded retries, autoscaling.

Delivery is at-least-once; callers make effects exactly-once by assigning an
idempotency key (the payroll run_id) before enqueueing, so a re-delivered job
that finds its effect already applied completes as Done.

The queue is generic over job kinds; handlers are plain callables. Worker
crashes surface as exceptions from the handler: the job is requeued with a
fixed backoff schedule until its attempts are exhausted.
"""
from __future__ import annotations

import itertools
import threading
import time
import uuid
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

DEFAULT_MAX_ATTEMPTS = 3
DEFAULT_CAPACITY = 10_000
RETRY_BACKOFF: tuple[float, ...] = (0.0, 0.1, 0.4)

KIND_RUN_PAYROLL = "run_payroll"


class QueueError(Exception):
    @property
    def code(self) -> str:
        return type(self).__name__


class QueueFull(QueueError):
    pass


class JobNotFound(QueueError):
    @property
    def code(self) -> str:
        return "NotFound"


class PermanentJobError(Exception):
    """Handler failure that retrying cannot fix; fails the job immediately."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class JobStatus(str, Enum):
    QUEUED = "queued"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"

    @property
    def terminal(self) -> bool:
        return self in (JobStatus.DONE, JobStatus.FAILED)


@dataclass
class Job:
    job_id: str
    kind: str
    payload: dict
    status: JobStatus = JobStatus.QUEUED
    attempts: int = 0
    max_attempts: int = DEFAULT_MAX_ATTEMPTS
    error: Optional[str] = None
    not_before: float = 0.0


Handler = Callable[[Job], None]


class JobQueue:
    """Thread-safe FIFO of jobs with lease/complete/retry bookkeeping."""

    def __init__(
        self,
        capacity: int = DEFAULT_CAPACITY,
        backoff: Sequence[float] = RETRY_BACKOFF,
        clock: Callable[[], float] = time.monotonic,
    ):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self._capacity = capacity
        self._backoff = tuple(backoff)
        self._clock = clock
        self._jobs: dict[str, Job] = {}
        self._pending: list[str] = []
        self._cond = threading.Condition()
        self._seq = itertools.count()
        self.jobs_done = 0
        self.jobs_failed = 0

    def enqueue(self, kind: str, payload: dict, max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> str:
        job_id = f"job-{next(self._seq):06d}-{uuid.uuid4().hex[:8]}"
        with self._cond:
            if len(self._pending) >= self._capacity:
                raise QueueFull(f"queue at capacity {self._capacity}")
            job = Job(job_id=job_id, kind=kind, payload=dict(payload), max_attempts=max_attempts)
            self._jobs[job_id] = job
            self._pending.append(job_id)
            self._cond.notify()
        return job_id

    def lease(self, block: bool = True, timeout: Optional[float] = None) -> Optional[Job]:
        """Hand the next eligible queued job to exactly one caller, marked Running."""
        deadline = None if timeout is None else self._clock() + timeout
        with self._cond:
            while True:
                now = self._clock()
                for i, job_id in enumerate(self._pending):
                    job = self._jobs[job_id]
                    if job.not_before <= now:
                        del self._pending[i]
                        job.status = JobStatus.RUNNING
                        job.attempts += 1
                        return job
                if not block:
                    return None
                # every pending job has not_before > now here, so wait is None or > 0
                wait = min((self._jobs[j].not_before - now for j in self._pending), default=None)
                if deadline is not None:
                    remaining = deadline - now
                    if remaining <= 0:
                        return None
                    wait = remaining if wait is None else min(wait, remaining)
                self._cond.wait(timeout=wait)

    def complete(self, job_id: str) -> None:
        with self._cond:
            job = self._require(job_id)
            job.status = JobStatus.DONE
            self.jobs_done += 1

    def fail_or_retry(self, job_id: str, error: str, permanent: bool = False) -> JobStatus:
        """Requeue with backoff while attempts remain, else fail terminally."""
        with self._cond:
            job = self._require(job_id)
            job.error = error
            if permanent or job.attempts >= job.max_attempts:
                job.status = JobStatus.FAILED
                self.jobs_failed += 1
            else:
                backoff_idx = min(job.attempts, len(self._backoff) - 1)
                job.not_before = self._clock() + self._backoff[backoff_idx]
                job.status = JobStatus.QUEUED
                self._pending.append(job_id)
                self._cond.notify()
            return job.status

    def poll_status(self, job_id: str) -> Job:
        with self._cond:
            return self._require(job_id)

    def _require(self, job_id: str) -> Job:
        job = self._jobs.get(job_id)
        if job is None:
            raise JobNotFound(f"job {job_id} not found")
        return job

    @property
    def depth(self) -> int:
        with self._cond:
            return len(self._pending)

    def running_count(self) -> int:
        with self._cond:
            return sum(1 for j in self._jobs.values() if j.status is JobStatus.RUNNING)

    def metrics(self) -> dict[str, int]:
        with self._cond:
            return {
                "depth": len(self._pending),
                "jobs_done": self.jobs_done,
                "jobs_failed": self.jobs_failed,
            }

    def wake_all(self) -> None:
        with self._cond:
            self._cond.notify_all()


def execute_job(queue: JobQueue, job: Job, handler: Handler) -> JobStatus:
    """Run one leased job to a status transition; shared by all executors."""
    try:
        handler(job)
    except PermanentJobError as exc:
        return queue.fail_or_retry(job.job_id, exc.code, permanent=True)
    except Exception as exc:
        return queue.fail_or_retry(job.job_id, type(exc).__name__)
    queue.complete(job.job_id)
    return JobStatus.DONE


def drain(queue: JobQueue, handlers: dict[str, Handler], max_steps: int = 100_000) -> int:
    """Synchronously execute queued jobs until none are eligible; returns steps.

    Deterministic single-executor loop used by tests and the fault harness.
    """
    steps = 0
    while steps < max_steps:
        job = queue.lease(block=False)
        if job is None:
            return steps
        execute_job(queue, job, handlers[job.kind])
        steps += 1
    raise RuntimeError(f"queue did not drain within {max_steps} steps")


class WorkerPool:
    """Pool of worker threads, each leasing one job at a time.

    Size changes only via :meth:`set_workers`; a retiring worker finishes its
    current job before exiting, so at most ``workers`` jobs run at once for a
    steady worker count.
    """

    def __init__(self, queue: JobQueue, handlers: dict[str, Handler], workers: int = 1):
        self._queue = queue
        self._handlers = handlers
        self._lock = threading.Lock()
        self._target = 0
        self._threads: set[threading.Thread] = set()
        self._stopped = False
        self.set_workers(workers)

    @property
    def workers(self) -> int:
        with self._lock:
            return self._target

    def live_count(self) -> int:
        with self._lock:
            return len(self._threads)

    def set_workers(self, count: int) -> None:
        if count < 0:
            raise ValueError("worker count must be >= 0")
        to_start: list[threading.Thread] = []
        with self._lock:
            if self._stopped:
                raise RuntimeError("pool is stopped")
            self._target = count
            while len(self._threads) + len(to_start) < count:
                to_start.append(threading.Thread(target=self._run, daemon=True))
            self._threads.update(to_start)
        for thread in to_start:
            thread.start()
        self._queue.wake_all()  # surplus workers notice the new target promptly

    def _run(self) -> None:
        me = threading.current_thread()
        while True:
            with self._lock:
                if self._stopped or len(self._threads) > self._target:
                    self._threads.discard(me)
                    return
            job = self._queue.lease(block=True, timeout=0.05)
            if job is not None:
                execute_job(self._queue, job, self._handlers[job.kind])

    def stop(self) -> None:
        with self._lock:
            self._stopped = True
            threads = list(self._threads)
        self._queue.wake_all()
        for thread in threads:
            thread.join(timeout=5)


@dataclass(frozen=True)
class ScalingPolicy:
    """Queue-depth watermarks driving the worker count."""

    min_workers: int = 1
    max_workers: int = 4
    high_watermark: int = 10
    low_watermark: int = 2
    cooldown_ticks: int = 5

    def __post_init__(self) -> None:
        if self.min_workers > self.max_workers:
            raise ValueError("min_workers must be <= max_workers")
        if self.low_watermark >= self.high_watermark:
            raise ValueError("low_watermark must be < high_watermark")
        if self.min_workers < 0 or self.cooldown_ticks < 1:
            raise ValueError("invalid scaling policy")


class Autoscaler:
    """Tick-driven scaler: callers feed it queue depth, it returns worker counts.

    Scale up one worker per tick while depth exceeds the high watermark;
    scale down one worker after ``cooldown_ticks`` consecutive ticks below
    the low watermark. Always stays within [min_workers, max_workers].
    """

    def __init__(self, policy: ScalingPolicy):
        self.policy = policy
        self._low_streak = 0

    def tick(self, depth: int, workers: int) -> int:
        policy = self.policy
        if depth > policy.high_watermark:
            self._low_streak = 0
            return min(workers + 1, policy.max_workers)
        if depth < policy.low_watermark:
            self._low_streak += 1
            if self._low_streak >= policy.cooldown_ticks:
                self._low_streak = 0
                return max(workers - 1, policy.min_workers)
            return workers
        self._low_streak = 0
        return workers


def autoscale_tick(depth: int, workers: int, scaler: Autoscaler) -> int:
    return scaler.tick(depth, workers)
