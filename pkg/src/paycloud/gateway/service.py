"""Operations behind the gateway: employee setup, time cards, async payroll runs.

Ties the pure engine to the durable store, the task queue, and the cache.
The payroll-run job handler is idempotent on run_id: at-least-once delivery
plus the ledger's uniqueness guard yields exactly one appended run.
"""
from __future__ import annotations

import time
import uuid
from typing import Callable, Optional

from paycloud.cache import TTLCache
from paycloud.core.engine import (
    apply_employee_change,
    make_change,
    run_payroll,
    verify_timecard,
)
from paycloud.core.model import (
    Compensation,
    Employee,
    EmployeeStatus,
    PayPeriod,
    RuleSet,
    TimeCard,
)
from paycloud.core.rulesets import builtin_rulesets
from paycloud.core.statement import EarningStatement, PayrollRun
from paycloud.queue import (
    KIND_RUN_PAYROLL,
    Job,
    JobQueue,
    PermanentJobError,
)
from paycloud.store import LedgerStore, NotFound, RunExists, VersionConflict


class VerificationFailed(Exception):
    """A submitted time card failed verification; carries all error codes."""

    def __init__(self, codes: list[str]):
        super().__init__(", ".join(codes))
        self.codes = codes

    @property
    def code(self) -> str:
        return self.codes[0]


FaultHook = Callable[[str, Job], None]


def _no_faults(point: str, job: Job) -> None:
    return None


class PayrollService:
    """Application operations shared by the HTTP gateway and the CLI server."""

    def __init__(
        self,
        store: LedgerStore,
        cache: TTLCache,
        queue: JobQueue,
        rulesets: Optional[dict[str, RuleSet]] = None,
        fault_hook: FaultHook = _no_faults,
        clock: Callable[[], float] = time.time,
    ):
        self.store = store
        self.cache = cache
        self.queue = queue
        self.rulesets = dict(builtin_rulesets() if rulesets is None else rulesets)
        self._fault_hook = fault_hook
        self._clock = clock

    def handlers(self) -> dict[str, Callable[[Job], None]]:
        return {KIND_RUN_PAYROLL: self.handle_run_payroll}

    # employees

    def create_employee(self, employee_id: str, name: str, compensation: Compensation) -> Employee:
        emp = Employee(id=employee_id, name=name, compensation=compensation)
        self.store.put_employee(emp)
        return emp

    def change_employee(
        self,
        employee_id: str,
        base_version: int,
        effective_period: PayPeriod,
        description: str,
        new_compensation: Optional[Compensation] = None,
        new_status: Optional[EmployeeStatus] = None,
    ) -> Employee:
        """Optimistic update: the change applies only against base_version."""
        current = self.store.get_employee(employee_id)
        if current.version != base_version:
            raise VersionConflict(
                f"employee {employee_id}: change based on version {base_version}, "
                f"stored version is {current.version}"
            )
        change = make_change(current, effective_period, description, new_compensation, new_status)
        updated = apply_employee_change(current, change)
        self.store.put_employee(updated)
        return updated

    # time cards

    def submit_timecard(self, employee_id: str, period: PayPeriod, quarter_hours: int, approved: bool) -> TimeCard:
        card = TimeCard(employee_id=employee_id, period=period, quarter_hours=quarter_hours, approved=approved)
        verified, errors = verify_timecard(card, self.store.list_employees(), self.store.list_timecards())
        if errors:
            raise VerificationFailed(errors)
        assert verified is not None
        self.store.put_timecard(verified)
        return verified

    # payroll runs

    def submit_payroll_run(
        self, period: PayPeriod, ruleset_id: str, supersedes: Optional[str] = None
    ) -> tuple[str, str]:
        """Assign the run_id idempotency key, enqueue, return (job_id, run_id)."""
        if ruleset_id not in self.rulesets:
            raise NotFound(f"ruleset {ruleset_id} not found")
        run_id = f"run-{uuid.uuid4().hex[:12]}"
        payload = {
            "period": str(period),
            "ruleset_id": ruleset_id,
            "run_id": run_id,
            "supersedes": supersedes,
        }
        job_id = self.queue.enqueue(KIND_RUN_PAYROLL, payload)
        return job_id, run_id

    def handle_run_payroll(self, job: Job) -> None:
        """Worker-side execution; safe under re-delivery.

        The cache is invalidated before the job can report Done, so no
        statement GET after completion serves a pre-run value.
        """
        payload = job.payload
        run_id = payload["run_id"]
        period = PayPeriod.parse(payload["period"])

        self._fault_hook("begin", job)

        if self.store.has_run(run_id):
            # An earlier delivery appended the run but crashed before acking;
            # re-invalidate and succeed idempotently.
            self._invalidate_for(period)
            return

        ruleset = self.rulesets.get(payload["ruleset_id"])
        if ruleset is None:
            raise PermanentJobError("NotFound", f"ruleset {payload['ruleset_id']} not found")

        run = run_payroll(
            period=period,
            employees=self.store.list_employees(),
            timecards=self.store.list_timecards(),
            ruleset=ruleset,
            run_id=run_id,
            created_at=self._clock(),
            supersedes=payload.get("supersedes"),
        )

        self._fault_hook("before_append", job)
        try:
            self.store.append_run(run)
        except RunExists as exc:
            if not self.store.has_run(run_id):
                # a different run owns the period: retrying cannot fix this
                raise PermanentJobError(exc.code, str(exc)) from exc
        except NotFound as exc:
            raise PermanentJobError(exc.code, str(exc)) from exc
        self._fault_hook("after_append", job)

        self._invalidate_for(period)

    def _invalidate_for(self, period: PayPeriod) -> None:
        self.cache.invalidate(f"stmt/{period}/")
        self.cache.invalidate("hist/")

    # reads

    def get_statement(self, employee_id: str, period: PayPeriod) -> tuple[EarningStatement, PayrollRun]:
        self.store.get_employee(employee_id)  # NotFound for unknown employees
        run = self.store.current_run_for(period)
        if run is None:
            raise NotFound(f"no payroll run for {period}")
        stmt = run.statement_for(employee_id)
        if stmt is None:
            raise NotFound(f"no statement for {employee_id} in {period}")
        return stmt, run

    def get_history(self, employee_id: str, period_from: PayPeriod, period_to: PayPeriod):
        return self.store.get_history(employee_id, period_from, period_to)
