"""Throughput benchmark: identical payroll content at different worker counts.

A seeded synthetic workforce is split into fixed shards; each shard is a
queued job whose statements are computed and digested, and the shard digests
combine in shard order. The content digest therefore depends only on
(seed, employee count), never on the worker count, while wall time shows how
processing scales with workers.

Worker threads offload shard computation to a process pool of the same
width, so CPU-bound payroll math actually runs in parallel.
"""
from __future__ import annotations

import csv
import hashlib
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

from paycloud.core.engine import run_payroll
from paycloud.core.model import Employee, HourlyRate, PayPeriod, TimeCard
from paycloud.core.rulesets import FIG2_NG
from paycloud.core.statement import render_statement
from paycloud.money import Money
from paycloud.queue import JobQueue, WorkerPool

BENCH_PERIOD = PayPeriod(2021, 6)
KIND_BENCH_SHARD = "bench_shard"
DEFAULT_SHARD_SIZE = 500

# rate and hours ranges bracket the demo statement's 2,500.00/hr and 45h
RATE_RANGE_KOBO = (150_000, 350_000)
QUARTER_HOURS_RANGE = (80, 240)


@dataclass(frozen=True)
class BenchReport:
    employees: int
    workers: int
    wall_ms: float
    throughput: float
    ledger_digest: str

    def as_dict(self) -> dict:
        return asdict(self)


def _workforce_member(seed: int, index: int) -> tuple[Employee, TimeCard]:
    # seeded per employee, so any index range regenerates identically anywhere
    rng = random.Random(f"{seed}:{index}")
    emp_id = f"bench-{index:06d}"
    employee = Employee(
        id=emp_id,
        name=f"Bench Employee {index}",
        compensation=HourlyRate(Money(rng.randint(*RATE_RANGE_KOBO))),
    )
    card = TimeCard(
        employee_id=emp_id,
        period=BENCH_PERIOD,
        quarter_hours=rng.randint(*QUARTER_HOURS_RANGE),
        approved=True,
        verified=True,
    )
    return employee, card


def synth_workforce(count: int, seed: int) -> tuple[list[Employee], list[TimeCard]]:
    """Seeded hourly employees and approved time cards; (seed, count) fix content."""
    members = [_workforce_member(seed, i) for i in range(count)]
    return [m[0] for m in members], [m[1] for m in members]


def compute_shard(seed: int, start: int, end: int) -> tuple[int, bytes]:
    """Statements for employees [start, end), reduced to per-statement digests.

    Regenerates its own slice of the workforce, so only three integers cross
    the process boundary in; 32 bytes per statement come back. Returning one
    digest per statement makes the combined content hash independent of how
    the workforce was sharded.
    """
    members = [_workforce_member(seed, i) for i in range(start, end)]
    run = run_payroll(
        BENCH_PERIOD,
        [m[0] for m in members],
        [m[1] for m in members],
        FIG2_NG,
        run_id="bench",
    )
    digests = b"".join(
        hashlib.sha256(render_statement(stmt).encode("utf-8")).digest() for stmt in run.statements
    )
    return len(run.statements), digests


def _warmup(value: int) -> int:
    return value


def run_bench(
    employees_count: int,
    workers: int,
    seed: int,
    shard_size: int = DEFAULT_SHARD_SIZE,
    use_processes: bool = True,
) -> BenchReport:
    if employees_count < 0 or workers < 1:
        raise ValueError("need employees >= 0 and workers >= 1")

    bounds = [
        (i, min(i + shard_size, employees_count)) for i in range(0, employees_count, shard_size)
    ]
    results: dict[int, tuple[int, bytes]] = {}

    executor: Optional[ProcessPoolExecutor] = None
    if use_processes and bounds:
        executor = ProcessPoolExecutor(max_workers=workers)
        list(executor.map(_warmup, range(workers)))  # spawn before the clock starts

    def handle_shard(job) -> None:
        index = job.payload["shard"]
        if index in results:
            return  # re-delivery after a crash: result already recorded
        start, end = bounds[index]
        if executor is not None:
            results[index] = executor.submit(compute_shard, seed, start, end).result()
        else:
            results[index] = compute_shard(seed, start, end)

    queue = JobQueue(capacity=max(len(bounds), 1))
    pool = WorkerPool(queue, {KIND_BENCH_SHARD: handle_shard}, workers=workers)
    try:
        started = time.perf_counter()
        for index in range(len(bounds)):
            queue.enqueue(KIND_BENCH_SHARD, {"shard": index})
        while True:
            metrics = queue.metrics()
            if metrics["jobs_failed"]:
                raise RuntimeError("benchmark shard job failed")
            if metrics["jobs_done"] == len(bounds):
                break
            time.sleep(0.001)
        wall_ms = (time.perf_counter() - started) * 1000.0
    finally:
        pool.stop()
        if executor is not None:
            executor.shutdown()

    combined = hashlib.sha256()
    statements = 0
    for index in range(len(bounds)):
        count, statement_digests = results[index]
        statements += count
        combined.update(statement_digests)

    throughput = statements / (wall_ms / 1000.0) if statements and wall_ms > 0 else 0.0
    return BenchReport(
        employees=employees_count,
        workers=workers,
        wall_ms=wall_ms,
        throughput=throughput,
        ledger_digest=combined.hexdigest(),
    )


def write_report_csv(reports: Sequence[BenchReport], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["employees", "workers", "wall_ms", "throughput", "ledger_digest"])
        writer.writeheader()
        for report in reports:
            writer.writerow(report.as_dict())


def render_report_figure(reports: Sequence[BenchReport], path: Path) -> None:
    """Bar chart of throughput per worker count, written next to the CSV."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path.parent.mkdir(parents=True, exist_ok=True)
    labels = [str(r.workers) for r in reports]
    throughputs = [r.throughput for r in reports]
    fig, ax = plt.subplots(figsize=(6, 4))
    bars = ax.bar(labels, throughputs, color="#3b7dd8")
    for bar, report in zip(bars, reports):
        ax.annotate(
            f"{report.wall_ms:.0f} ms",
            xy=(bar.get_x() + bar.get_width() / 2, bar.get_height()),
            xytext=(0, 3),
            textcoords="offset points",
            ha="center",
            fontsize=9,
        )
    ax.set_xlabel("workers")
    ax.set_ylabel("statements / second")
    ax.set_title(f"payroll throughput, {reports[0].employees} employees" if reports else "payroll throughput")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
