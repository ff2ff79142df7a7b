import threading
import time

import pytest

from paycloud.queue import (
    Autoscaler,
    JobNotFound,
    JobQueue,
    JobStatus,
    PermanentJobError,
    QueueFull,
    ScalingPolicy,
    WorkerPool,
    autoscale_tick,
    drain,
    execute_job,
)

NO_BACKOFF = (0.0, 0.0, 0.0)


def instant_queue(capacity=100):
    return JobQueue(capacity=capacity, backoff=NO_BACKOFF)


class TestEnqueuePoll:
    def test_enqueue_returns_queued_job(self):
        q = instant_queue()
        job_id = q.enqueue("work", {"n": 1})
        assert q.poll_status(job_id).status is JobStatus.QUEUED
        assert q.depth == 1

    def test_two_enqueues_distinct_ids(self):
        q = instant_queue()
        assert q.enqueue("work", {}) != q.enqueue("work", {})

    def test_queue_full(self):
        q = instant_queue(capacity=3)
        for _ in range(3):
            q.enqueue("work", {})
        with pytest.raises(QueueFull):
            q.enqueue("work", {})

    def test_poll_unknown_id(self):
        with pytest.raises(JobNotFound):
            instant_queue().poll_status("nope")

    def test_done_is_terminal_and_stable(self):
        q = instant_queue()
        job_id = q.enqueue("work", {})
        drain(q, {"work": lambda job: None})
        assert q.poll_status(job_id).status is JobStatus.DONE
        for _ in range(5):
            assert q.poll_status(job_id).status is JobStatus.DONE


class TestExecution:
    def test_happy_path(self):
        q = instant_queue()
        seen = []
        job_id = q.enqueue("work", {"n": 7})
        drain(q, {"work": lambda job: seen.append(job.payload["n"])})
        assert seen == [7]
        assert q.poll_status(job_id).status is JobStatus.DONE
        assert q.poll_status(job_id).attempts == 1

    def test_retry_then_success(self):
        q = instant_queue()
        calls = []

        def flaky(job):
            calls.append(job.attempts)
            if len(calls) < 3:
                raise RuntimeError("transient")

        job_id = q.enqueue("work", {})
        drain(q, {"work": flaky})
        job = q.poll_status(job_id)
        assert job.status is JobStatus.DONE
        assert job.attempts == 3
        assert calls == [1, 2, 3]

    def test_attempts_exhausted_fails(self):
        q = instant_queue()

        def broken(job):
            raise RuntimeError("always")

        job_id = q.enqueue("work", {})
        drain(q, {"work": broken})
        job = q.poll_status(job_id)
        assert job.status is JobStatus.FAILED
        assert job.attempts == 3
        assert job.error == "RuntimeError"
        assert q.metrics()["jobs_failed"] == 1

    def test_permanent_error_fails_without_retry(self):
        q = instant_queue()

        def rejected(job):
            raise PermanentJobError("RunExists", "period taken")

        job_id = q.enqueue("work", {})
        drain(q, {"work": rejected})
        job = q.poll_status(job_id)
        assert job.status is JobStatus.FAILED
        assert job.attempts == 1
        assert job.error == "RunExists"

    def test_lease_hands_each_job_to_one_caller(self):
        q = instant_queue()
        q.enqueue("work", {})
        first = q.lease(block=False)
        assert first is not None and first.status is JobStatus.RUNNING
        assert q.lease(block=False) is None

    def test_backoff_delays_requeue(self):
        now = [0.0]
        q = JobQueue(backoff=(0.0, 0.1, 0.4), clock=lambda: now[0])
        q.enqueue("work", {})
        job = q.lease(block=False)
        q.fail_or_retry(job.job_id, "boom")  # first retry waits 0.1
        assert q.lease(block=False) is None
        now[0] = 0.11
        job = q.lease(block=False)
        assert job is not None and job.attempts == 2


class TestWorkerPool:
    def test_no_lost_jobs_and_concurrency_bound(self):
        q = instant_queue(capacity=200)
        lock = threading.Lock()
        state = {"running": 0, "max_running": 0, "done": 0}

        def handler(job):
            with lock:
                state["running"] += 1
                state["max_running"] = max(state["max_running"], state["running"])
            time.sleep(0.004)
            with lock:
                state["running"] -= 1
                state["done"] += 1

        job_ids = [q.enqueue("work", {"i": i}) for i in range(60)]
        pool = WorkerPool(q, {"work": handler}, workers=4)
        try:
            deadline = time.monotonic() + 20
            while time.monotonic() < deadline:
                statuses = [q.poll_status(j).status for j in job_ids]
                if all(s.terminal for s in statuses):
                    break
                time.sleep(0.01)
            assert all(q.poll_status(j).status is JobStatus.DONE for j in job_ids)
            assert state["done"] == 60
            assert state["max_running"] <= 4
        finally:
            pool.stop()

    def test_resize_down_then_up(self):
        q = instant_queue(capacity=200)
        pool = WorkerPool(q, {"work": lambda job: None}, workers=3)
        try:
            pool.set_workers(0)
            deadline = time.monotonic() + 5
            while pool.live_count() > 0 and time.monotonic() < deadline:
                time.sleep(0.01)
            assert pool.live_count() == 0

            job_id = q.enqueue("work", {})
            time.sleep(0.05)
            assert q.poll_status(job_id).status is JobStatus.QUEUED  # nobody working

            pool.set_workers(2)
            deadline = time.monotonic() + 5
            while not q.poll_status(job_id).status.terminal and time.monotonic() < deadline:
                time.sleep(0.01)
            assert q.poll_status(job_id).status is JobStatus.DONE
        finally:
            pool.stop()


class TestAutoscaler:
    def policy(self):
        return ScalingPolicy(min_workers=1, max_workers=4, high_watermark=10, low_watermark=2, cooldown_ticks=5)

    def test_floor_at_min(self):
        scaler = Autoscaler(self.policy())
        assert scaler.tick(depth=0, workers=1) == 1

    def test_scale_up_steps_and_cap(self):
        scaler = Autoscaler(self.policy())
        assert scaler.tick(50, 2) == 3
        assert scaler.tick(50, 3) == 4
        for _ in range(5):
            assert scaler.tick(50, 4) == 4  # never exceeds max

    def test_scale_down_after_cooldown(self):
        scaler = Autoscaler(self.policy())
        workers = 4
        for tick in range(1, 5):
            workers = scaler.tick(0, workers)
            assert workers == 4, f"tick {tick} must not scale down yet"
        workers = scaler.tick(0, workers)
        assert workers == 3  # fifth consecutive low tick

    def test_mid_band_depth_resets_cooldown(self):
        scaler = Autoscaler(self.policy())
        for _ in range(4):
            assert scaler.tick(0, 4) == 4
        assert scaler.tick(5, 4) == 4  # between watermarks: streak resets
        for _ in range(4):
            assert scaler.tick(0, 4) == 4
        assert scaler.tick(0, 4) == 3

    def test_scripted_sequence_matches_policy_table(self):
        scaler = Autoscaler(self.policy())
        workers = 1
        script = [
            (15, 2), (15, 3), (15, 4), (15, 4),  # burst: up to cap
            (8, 4), (8, 4),                      # mid band: hold
            (0, 4), (0, 4), (0, 4), (0, 4), (0, 3),  # low: hold 4 ticks, drop on 5th
            (0, 3), (0, 3), (0, 3), (0, 3), (0, 2),  # next cooldown window
            (50, 3),                             # spike scales up again
        ]
        for depth, expected in script:
            workers = autoscale_tick(depth, workers, scaler)
            assert workers == expected
            assert 1 <= workers <= 4

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            ScalingPolicy(min_workers=5, max_workers=4)
        with pytest.raises(ValueError):
            ScalingPolicy(low_watermark=10, high_watermark=10)
        with pytest.raises(ValueError):
            ScalingPolicy(cooldown_ticks=0)
