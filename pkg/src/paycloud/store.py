"""Durable storage: employees, time cards, and the append-only payroll-run ledger.

Layout is a directory of line-delimited JSON files (``employees.jsonl``,
``timecards.jsonl``, ``runs.jsonl``), one self-describing record per line
with a ``schema_version`` field. Every acknowledged append is flushed and
fsynced first, so acknowledged runs survive a crash. Recovery tolerates
exactly one torn trailing record per file; anything else is corruption.

Concurrency: single writer, any number of readers. All mutations and reads
serialize through one lock over in-memory indexes, so no torn run is ever
visible mid-append.
"""
from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Optional

from paycloud.core.model import (
    Employee,
    PayPeriod,
    TimeCard,
    employee_from_dict,
    employee_to_dict,
    timecard_from_dict,
    timecard_to_dict,
)
from paycloud.core.statement import EarningStatement, PayrollRun, run_from_dict, run_to_dict

SCHEMA_VERSION = 1

EMPLOYEES_FILE = "employees.jsonl"
TIMECARDS_FILE = "timecards.jsonl"
RUNS_FILE = "runs.jsonl"


class StoreError(Exception):
    @property
    def code(self) -> str:
        return type(self).__name__


class NotFound(StoreError):
    pass


class VersionConflict(StoreError):
    pass


class RunExists(StoreError):
    pass


class DuplicateTimeCard(StoreError):
    pass


class CorruptStore(StoreError):
    pass


def _read_records(path: Path) -> list[dict]:
    """Parse a jsonl file, dropping at most one torn trailing line."""
    if not path.exists():
        return []
    raw = path.read_text(encoding="utf-8")
    if not raw:
        return []
    lines = raw.split("\n")
    if lines[-1] == "":
        lines.pop()
    records: list[dict] = []
    for i, line in enumerate(lines):
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            if i == len(lines) - 1:
                break  # torn trailing record from an interrupted append
            raise CorruptStore(f"{path.name}: unparseable record at line {i + 1}")
        if not isinstance(record, dict) or record.get("schema_version") != SCHEMA_VERSION:
            raise CorruptStore(f"{path.name}: unsupported schema at line {i + 1}")
        records.append(record)
    return records


class LedgerStore:
    """The durable store behind the payroll platform."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._employees: dict[str, Employee] = {}
        self._timecards: dict[tuple[str, str], TimeCard] = {}
        self._runs: list[PayrollRun] = []
        self._runs_by_id: dict[str, PayrollRun] = {}
        self._load()

    def _load(self) -> None:
        for record in _read_records(self.root / EMPLOYEES_FILE):
            emp = employee_from_dict(record)
            self._employees[emp.id] = emp
        for record in _read_records(self.root / TIMECARDS_FILE):
            tc = timecard_from_dict(record)
            self._timecards[(tc.employee_id, str(tc.period))] = tc
        for record in _read_records(self.root / RUNS_FILE):
            run = run_from_dict(record)
            self._runs.append(run)
            self._runs_by_id[run.run_id] = run

    def _append(self, filename: str, record: dict) -> None:
        line = json.dumps({"schema_version": SCHEMA_VERSION, **record}, ensure_ascii=False)
        with open(self.root / filename, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    # employees

    def put_employee(self, emp: Employee) -> int:
        """Create or update; updates must carry exactly current version + 1."""
        with self._lock:
            current = self._employees.get(emp.id)
            if current is None:
                if emp.version != 1:
                    raise VersionConflict(f"new employee {emp.id} must start at version 1, got {emp.version}")
            elif emp.version != current.version + 1:
                raise VersionConflict(
                    f"employee {emp.id}: expected version {current.version + 1}, got {emp.version}"
                )
            self._append(EMPLOYEES_FILE, employee_to_dict(emp))
            self._employees[emp.id] = emp
            return emp.version

    def get_employee(self, employee_id: str) -> Employee:
        with self._lock:
            emp = self._employees.get(employee_id)
            if emp is None:
                raise NotFound(f"employee {employee_id} not found")
            return emp

    def has_employee(self, employee_id: str) -> bool:
        with self._lock:
            return employee_id in self._employees

    def list_employees(self) -> list[Employee]:
        with self._lock:
            return sorted(self._employees.values(), key=lambda e: e.id)

    # time cards

    def put_timecard(self, tc: TimeCard) -> None:
        with self._lock:
            key = (tc.employee_id, str(tc.period))
            if key in self._timecards:
                raise DuplicateTimeCard(f"time card for {tc.employee_id} in {tc.period} already stored")
            self._append(TIMECARDS_FILE, timecard_to_dict(tc))
            self._timecards[key] = tc

    def list_timecards(self) -> list[TimeCard]:
        with self._lock:
            return sorted(self._timecards.values(), key=lambda t: (t.employee_id, str(t.period)))

    # payroll runs

    def _current_run_for(self, period: PayPeriod) -> Optional[PayrollRun]:
        superseded = {r.supersedes for r in self._runs if r.supersedes}
        candidates = [r for r in self._runs if r.period == period and r.run_id not in superseded]
        return candidates[-1] if candidates else None

    def append_run(self, run: PayrollRun) -> int:
        """Durably append; returns the ledger position.

        A period has at most one non-superseded run: appending without
        ``supersedes`` fails if one exists, and ``supersedes`` must name it.
        """
        with self._lock:
            if run.run_id in self._runs_by_id:
                raise RunExists(f"run {run.run_id} already appended")
            current = self._current_run_for(run.period)
            if run.supersedes is None:
                if current is not None:
                    raise RunExists(f"period {run.period} already has run {current.run_id}")
            else:
                if run.supersedes not in self._runs_by_id:
                    raise NotFound(f"superseded run {run.supersedes} not found")
                if current is None or current.run_id != run.supersedes:
                    raise RunExists(
                        f"run {run.supersedes} is not the current run for {run.period}"
                    )
            self._append(RUNS_FILE, run_to_dict(run))
            self._runs.append(run)
            self._runs_by_id[run.run_id] = run
            return len(self._runs) - 1

    def has_run(self, run_id: str) -> bool:
        with self._lock:
            return run_id in self._runs_by_id

    def get_run(self, run_id: str) -> PayrollRun:
        with self._lock:
            run = self._runs_by_id.get(run_id)
            if run is None:
                raise NotFound(f"run {run_id} not found")
            return run

    def current_run_for(self, period: PayPeriod) -> Optional[PayrollRun]:
        with self._lock:
            return self._current_run_for(period)

    def list_runs(self) -> list[PayrollRun]:
        with self._lock:
            return list(self._runs)

    def get_history(
        self, employee_id: str, period_from: PayPeriod, period_to: PayPeriod
    ) -> list[EarningStatement]:
        """Statements for one employee across non-superseded runs in [from, to]."""
        if period_from > period_to:
            raise ValueError(f"empty range: {period_from} > {period_to}")
        with self._lock:
            if employee_id not in self._employees:
                raise NotFound(f"employee {employee_id} not found")
            superseded = {r.supersedes for r in self._runs if r.supersedes}
            statements = [
                stmt
                for run in self._runs
                if run.run_id not in superseded and period_from <= run.period <= period_to
                for stmt in run.statements
                if stmt.employee_id == employee_id
            ]
            statements.sort(key=lambda s: (s.period.year, s.period.month))
            return statements
