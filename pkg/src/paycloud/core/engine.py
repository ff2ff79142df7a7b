"""Payroll operations: gross pay, rule application, verification, wage runs, changes.

Every function here is pure: value inputs, value outputs, no shared state,
safe to call from any number of concurrent executors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from paycloud.core.model import (
    AnnualContract,
    Compensation,
    Employee,
    EmployeeChange,
    EmployeeStatus,
    FlatAmount,
    HourlyRate,
    MonthlySalary,
    PayPeriod,
    Payer,
    PercentOfGross,
    RuleSet,
    TimeCard,
    with_verified,
)
from paycloud.core.statement import (
    EarningLine,
    EarningStatement,
    MoneyLine,
    PayrollRun,
    RunStatus,
)
from paycloud.money import Money

MONTHS_PER_YEAR = 12
BASIS_POINT_SCALE = 10000


class PayrollError(Exception):
    """Base for engine errors; ``code`` mirrors the error name on the wire."""

    @property
    def code(self) -> str:
        return type(self).__name__


class HoursRequired(PayrollError):
    """Hourly compensation needs an hours figure."""


class HoursForbidden(PayrollError):
    """Salaried compensation does not take hours."""


class NegativeNet(PayrollError):
    """Withholdings exceed gross; the statement is rejected."""


class RetroactiveChange(PayrollError):
    """A change may not take effect before the latest existing change."""


def compute_gross(comp: Compensation, quarter_hours: Optional[int] = None) -> Money:
    """Gross pay for one monthly period under the given compensation.

    Hourly pay is rate x hours evaluated as an exact rational and rounded
    half-up to the minor unit; annual contracts pay a half-up twelfth.
    """
    if isinstance(comp, HourlyRate):
        if quarter_hours is None:
            raise HoursRequired("hourly compensation requires hours")
        if quarter_hours < 0:
            raise ValueError(f"negative hours: {quarter_hours}")
        return comp.rate.scale(quarter_hours, 4)
    if quarter_hours is not None:
        raise HoursForbidden("salaried compensation does not take hours")
    if isinstance(comp, MonthlySalary):
        return comp.amount
    if isinstance(comp, AnnualContract):
        return comp.amount.scale(1, MONTHS_PER_YEAR)
    raise TypeError(f"unknown compensation type: {comp!r}")


@dataclass(frozen=True)
class RuleBreakdown:
    """Result of applying a ruleset to a gross amount."""

    withheld: tuple[MoneyLine, ...]
    employer: tuple[MoneyLine, ...]
    net: Money


def apply_rules(gross: Money, ruleset: RuleSet) -> RuleBreakdown:
    """Evaluate rules in list order against gross.

    Percent lines round half-up on basis points of gross; employer-tax lines
    are reported but never deducted. Raises :class:`NegativeNet` when the
    withheld total exceeds gross.
    """
    if gross.is_negative():
        raise ValueError(f"gross must be >= 0, got {gross.amount}")
    withheld: list[MoneyLine] = []
    employer: list[MoneyLine] = []
    for rule in ruleset.rules:
        if isinstance(rule.basis, PercentOfGross):
            amount = gross.scale(rule.basis.basis_points, BASIS_POINT_SCALE)
        elif isinstance(rule.basis, FlatAmount):
            amount = rule.basis.amount
        else:
            raise TypeError(f"unknown rule basis: {rule.basis!r}")
        line = MoneyLine(rule.label, amount)
        if rule.payer is Payer.EMPLOYEE_WITHHELD:
            withheld.append(line)
        else:
            employer.append(line)
    total_withheld = sum(line.current.amount for line in withheld)
    if total_withheld > gross.amount:
        raise NegativeNet(f"withheld {total_withheld} exceeds gross {gross.amount}")
    net = Money(gross.amount - total_withheld, gross.currency)
    return RuleBreakdown(withheld=tuple(withheld), employer=tuple(employer), net=net)


def compensation_at(emp: Employee, period: PayPeriod) -> Compensation:
    """Compensation effective at a period: last change with effective_period <= period."""
    value = emp.base_compensation()
    for change in emp.changes:
        if change.effective_period <= period:
            value = change.new_compensation
    return value


def status_at(emp: Employee, period: PayPeriod) -> EmployeeStatus:
    """Status effective at a period, same effective-dating rule as compensation."""
    value = emp.base_status()
    for change in emp.changes:
        if change.effective_period <= period:
            value = change.new_status
    return value


def verify_timecard(
    tc: TimeCard,
    employees: Iterable[Employee],
    existing_timecards: Iterable[TimeCard],
) -> tuple[Optional[TimeCard], list[str]]:
    """Validate a submitted time card; side-effect free.

    Returns (card marked verified, []) on success, else (None, error codes).
    """
    errors: list[str] = []
    if tc.quarter_hours < 0:
        errors.append("NegativeHours")
    elif tc.quarter_hours > tc.max_quarter_hours():
        errors.append("ExcessiveHours")

    employee = next((e for e in employees if e.id == tc.employee_id), None)
    if employee is None:
        errors.append("UnknownEmployee")
    elif status_at(employee, tc.period) is not EmployeeStatus.ACTIVE:
        errors.append("InactiveEmployee")

    if any(c.employee_id == tc.employee_id and c.period == tc.period for c in existing_timecards):
        errors.append("DuplicateTimeCard")

    if errors:
        return None, errors
    return with_verified(tc), []


def make_change(
    emp: Employee,
    effective_period: PayPeriod,
    description: str,
    new_compensation: Optional[Compensation] = None,
    new_status: Optional[EmployeeStatus] = None,
) -> EmployeeChange:
    """Build a change against an employee's current state; None keeps a value."""
    return EmployeeChange(
        effective_period=effective_period,
        description=description,
        old_compensation=emp.compensation,
        new_compensation=emp.compensation if new_compensation is None else new_compensation,
        old_status=emp.status,
        new_status=emp.status if new_status is None else new_status,
    )


def apply_employee_change(emp: Employee, change: EmployeeChange) -> Employee:
    """Append a change and bump the version; history before it never mutates.

    Raises :class:`RetroactiveChange` if the change would take effect before
    the latest existing change.
    """
    if emp.changes and change.effective_period < emp.changes[-1].effective_period:
        raise RetroactiveChange(
            f"change effective {change.effective_period} predates latest "
            f"{emp.changes[-1].effective_period}"
        )
    return Employee(
        id=emp.id,
        name=emp.name,
        compensation=change.new_compensation,
        status=change.new_status,
        version=emp.version + 1,
        changes=emp.changes + (change,),
    )


def _earning_line(comp: Compensation, quarter_hours: Optional[int], gross: Money) -> EarningLine:
    if isinstance(comp, HourlyRate):
        return EarningLine("Regular pay", comp.rate, quarter_hours, gross)
    if isinstance(comp, MonthlySalary):
        return EarningLine("Monthly salary", gross, None, gross)
    return EarningLine("Contract salary", gross, None, gross)


def run_payroll(
    period: PayPeriod,
    employees: Sequence[Employee],
    timecards: Sequence[TimeCard],
    ruleset: RuleSet,
    run_id: str,
    created_at: float = 0.0,
    supersedes: Optional[str] = None,
) -> PayrollRun:
    """Generate wages for every employee active in the period.

    Hourly employees are paid the sum of their approved+verified time cards
    for the period; per-employee problems become warnings, never failures.
    Deterministic: identical inputs yield an identical statement list
    (run_id and created_at come from the caller).
    """
    statements: list[EarningStatement] = []
    warnings: list[str] = []

    cards_by_employee: dict[str, list[TimeCard]] = {}
    for tc in timecards:
        if tc.period == period:
            cards_by_employee.setdefault(tc.employee_id, []).append(tc)

    for emp in sorted(employees, key=lambda e: e.id):
        if status_at(emp, period) is not EmployeeStatus.ACTIVE:
            continue
        comp = compensation_at(emp, period)

        if isinstance(comp, HourlyRate):
            cards = cards_by_employee.get(emp.id, [])
            usable = [tc for tc in cards if tc.approved and tc.verified]
            for tc in cards:
                if not tc.approved:
                    warnings.append(f"{emp.id}: unapproved time card for {period} excluded")
                elif not tc.verified:
                    warnings.append(f"{emp.id}: unverified time card for {period} excluded")
            if not usable:
                warnings.append(f"{emp.id}: no approved time card for {period}; skipped")
                continue
            quarter_hours: Optional[int] = sum(tc.quarter_hours for tc in usable)
        else:
            quarter_hours = None

        gross = compute_gross(comp, quarter_hours)
        try:
            breakdown = apply_rules(gross, ruleset)
        except NegativeNet:
            warnings.append(f"{emp.id}: withholdings exceed gross for {period}; statement rejected")
            continue

        statements.append(
            EarningStatement(
                employee_id=emp.id,
                period=period,
                earnings=(_earning_line(comp, quarter_hours, gross),),
                gross=gross,
                withheld=breakdown.withheld,
                employer=breakdown.employer,
                net=breakdown.net,
            )
        )

    status = RunStatus.DONE_WITH_WARNINGS if warnings else RunStatus.DONE
    return PayrollRun(
        run_id=run_id,
        period=period,
        ruleset_id=ruleset.id,
        status=status,
        statements=tuple(statements),
        warnings=tuple(warnings),
        supersedes=supersedes,
        created_at=created_at,
    )
