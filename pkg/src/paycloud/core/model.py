"""Payroll domain model: pay periods, compensation, employees, time cards, rules.

Everything here is an immutable value; hours are integer quarter-hour counts
and money is integer minor units, so equality is exact.
"""
from __future__ import annotations

import calendar
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union

from paycloud.money import Money

QUARTERS_PER_HOUR = 4


class ModelError(ValueError):
    """An invariant of the domain model was violated at construction."""


@dataclass(frozen=True, order=True)
class PayPeriod:
    """One monthly pay interval, totally ordered by (year, month)."""

    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ModelError(f"month out of range: {self.month}")

    def days_in_month(self) -> int:
        return calendar.monthrange(self.year, self.month)[1]

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    @classmethod
    def parse(cls, text: str) -> "PayPeriod":
        try:
            year_s, month_s = text.split("-")
            return cls(int(year_s), int(month_s))
        except (ValueError, ModelError) as exc:
            raise ModelError(f"not a YYYY-MM period: {text!r}") from exc


@dataclass(frozen=True)
class HourlyRate:
    """Pay rate per hour; gross follows hours worked."""

    rate: Money

    def __post_init__(self) -> None:
        if self.rate.is_negative():
            raise ModelError("hourly rate must be >= 0")


@dataclass(frozen=True)
class MonthlySalary:
    """Fixed amount per month."""

    amount: Money

    def __post_init__(self) -> None:
        if self.amount.is_negative():
            raise ModelError("monthly salary must be >= 0")


@dataclass(frozen=True)
class AnnualContract:
    """Fixed amount per contract year, paid in monthly twelfths."""

    amount: Money

    def __post_init__(self) -> None:
        if self.amount.is_negative():
            raise ModelError("annual contract amount must be >= 0")


Compensation = Union[HourlyRate, MonthlySalary, AnnualContract]


class EmployeeStatus(str, Enum):
    ACTIVE = "active"
    TERMINATED = "terminated"


@dataclass(frozen=True)
class EmployeeChange:
    """One effective-dated change to compensation and/or status.

    Old values are always captured so the state at any period can be replayed.
    """

    effective_period: PayPeriod
    description: str
    old_compensation: Compensation
    new_compensation: Compensation
    old_status: EmployeeStatus
    new_status: EmployeeStatus


@dataclass(frozen=True)
class Employee:
    """An employee's current state plus the ordered change history behind it.

    ``version`` is always 1 + len(changes); ``compensation``/``status`` are the
    values after the last change.
    """

    id: str
    name: str
    compensation: Compensation
    status: EmployeeStatus = EmployeeStatus.ACTIVE
    version: int = 1
    changes: tuple[EmployeeChange, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.id:
            raise ModelError("employee id must be non-empty")
        if self.version != 1 + len(self.changes):
            raise ModelError(f"version {self.version} != 1 + {len(self.changes)} changes")

    def base_compensation(self) -> Compensation:
        return self.changes[0].old_compensation if self.changes else self.compensation

    def base_status(self) -> EmployeeStatus:
        return self.changes[0].old_status if self.changes else self.status


@dataclass(frozen=True)
class TimeCard:
    """Hours worked by one employee in one period, as submitted.

    Deliberately unvalidated: verification is a separate operation so bad
    submissions can be reported rather than crash at construction.
    """

    employee_id: str
    period: PayPeriod
    quarter_hours: int
    approved: bool = False
    verified: bool = False

    def max_quarter_hours(self) -> int:
        return 24 * self.period.days_in_month() * QUARTERS_PER_HOUR


class Payer(str, Enum):
    EMPLOYEE_WITHHELD = "employee_withheld"
    EMPLOYER_TAX = "employer_tax"


@dataclass(frozen=True)
class FlatAmount:
    amount: Money

    def __post_init__(self) -> None:
        if self.amount.is_negative():
            raise ModelError("flat amount must be >= 0")


@dataclass(frozen=True)
class PercentOfGross:
    """Rate in basis points of gross, 0..10000."""

    basis_points: int

    def __post_init__(self) -> None:
        if not 0 <= self.basis_points <= 10000:
            raise ModelError(f"basis points out of range: {self.basis_points}")


RuleBasis = Union[FlatAmount, PercentOfGross]


@dataclass(frozen=True)
class PayRule:
    """One deduction or employer-tax line applied to gross."""

    id: str
    label: str
    payer: Payer
    basis: RuleBasis

    def __post_init__(self) -> None:
        if "|" in self.label or "\n" in self.label:
            raise ModelError("rule label may not contain '|' or newline")


@dataclass(frozen=True)
class RuleSet:
    """Ordered rules; evaluation order is list order."""

    id: str
    rules: tuple[PayRule, ...]

    def __post_init__(self) -> None:
        ids = [r.id for r in self.rules]
        if len(set(ids)) != len(ids):
            raise ModelError(f"duplicate rule ids in ruleset {self.id!r}")


def format_quarter_hours(quarter_hours: int) -> str:
    """Render quarter-hour counts as hours with exactly two decimals (45.00, 0.25)."""
    if quarter_hours < 0:
        raise ModelError(f"cannot format negative hours: {quarter_hours}")
    return f"{quarter_hours // QUARTERS_PER_HOUR}.{(quarter_hours % QUARTERS_PER_HOUR) * 25:02d}"


def parse_quarter_hours(text: str) -> int:
    """Inverse of :func:`format_quarter_hours`; accepts only whole quarter-hours."""
    whole, dot, frac = text.strip().partition(".")
    if not whole.isdigit():
        raise ModelError(f"not an hours value: {text!r}")
    quarters = int(whole) * QUARTERS_PER_HOUR
    if dot:
        if frac not in ("00", "25", "50", "75"):
            raise ModelError(f"hours must be whole quarter-hours: {text!r}")
        quarters += int(frac) // 25
    return quarters


# Plain-dict codecs shared by the datastore and the HTTP wire format.

def compensation_to_dict(comp: Compensation) -> dict:
    if isinstance(comp, HourlyRate):
        return {"kind": "hourly", "amount": comp.rate.amount, "currency": comp.rate.currency}
    if isinstance(comp, MonthlySalary):
        return {"kind": "monthly", "amount": comp.amount.amount, "currency": comp.amount.currency}
    if isinstance(comp, AnnualContract):
        return {"kind": "annual", "amount": comp.amount.amount, "currency": comp.amount.currency}
    raise ModelError(f"unknown compensation type: {comp!r}")


def compensation_from_dict(data: dict) -> Compensation:
    money = Money(int(data["amount"]), data.get("currency", "NGN"))
    kind = data["kind"]
    if kind == "hourly":
        return HourlyRate(money)
    if kind == "monthly":
        return MonthlySalary(money)
    if kind == "annual":
        return AnnualContract(money)
    raise ModelError(f"unknown compensation kind: {kind!r}")


def employee_to_dict(emp: Employee) -> dict:
    return {
        "id": emp.id,
        "name": emp.name,
        "compensation": compensation_to_dict(emp.compensation),
        "status": emp.status.value,
        "version": emp.version,
        "changes": [
            {
                "effective_period": str(c.effective_period),
                "description": c.description,
                "old_compensation": compensation_to_dict(c.old_compensation),
                "new_compensation": compensation_to_dict(c.new_compensation),
                "old_status": c.old_status.value,
                "new_status": c.new_status.value,
            }
            for c in emp.changes
        ],
    }


def employee_from_dict(data: dict) -> Employee:
    changes = tuple(
        EmployeeChange(
            effective_period=PayPeriod.parse(c["effective_period"]),
            description=c["description"],
            old_compensation=compensation_from_dict(c["old_compensation"]),
            new_compensation=compensation_from_dict(c["new_compensation"]),
            old_status=EmployeeStatus(c["old_status"]),
            new_status=EmployeeStatus(c["new_status"]),
        )
        for c in data.get("changes", [])
    )
    return Employee(
        id=data["id"],
        name=data["name"],
        compensation=compensation_from_dict(data["compensation"]),
        status=EmployeeStatus(data["status"]),
        version=int(data["version"]),
        changes=changes,
    )


def timecard_to_dict(tc: TimeCard) -> dict:
    return {
        "employee_id": tc.employee_id,
        "period": str(tc.period),
        "quarter_hours": tc.quarter_hours,
        "approved": tc.approved,
        "verified": tc.verified,
    }


def timecard_from_dict(data: dict) -> TimeCard:
    return TimeCard(
        employee_id=data["employee_id"],
        period=PayPeriod.parse(data["period"]),
        quarter_hours=int(data["quarter_hours"]),
        approved=bool(data["approved"]),
        verified=bool(data["verified"]),
    )


def with_verified(tc: TimeCard) -> TimeCard:
    return replace(tc, verified=True)


def rule_to_dict(rule: PayRule) -> dict:
    if isinstance(rule.basis, FlatAmount):
        basis = {"kind": "flat", "amount": rule.basis.amount.amount, "currency": rule.basis.amount.currency}
    else:
        basis = {"kind": "percent_of_gross", "basis_points": rule.basis.basis_points}
    return {"id": rule.id, "label": rule.label, "payer": rule.payer.value, "basis": basis}


def rule_from_dict(data: dict) -> PayRule:
    b = data["basis"]
    basis: RuleBasis
    if b["kind"] == "flat":
        basis = FlatAmount(Money(int(b["amount"]), b.get("currency", "NGN")))
    elif b["kind"] == "percent_of_gross":
        basis = PercentOfGross(int(b["basis_points"]))
    else:
        raise ModelError(f"unknown rule basis kind: {b['kind']!r}")
    return PayRule(id=data["id"], label=data["label"], payer=Payer(data["payer"]), basis=basis)


def ruleset_to_dict(rs: RuleSet) -> dict:
    return {"id": rs.id, "rules": [rule_to_dict(r) for r in rs.rules]}


def ruleset_from_dict(data: dict) -> RuleSet:
    return RuleSet(id=data["id"], rules=tuple(rule_from_dict(r) for r in data["rules"]))
