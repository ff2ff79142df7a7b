"""Earning statements, payroll runs, and the pipe-delimited statement text format.

The text format is byte-deterministic: one record per line, fields separated
by ``|``, money with exactly two decimals, hours with exactly two decimals.
Line kinds appear in fixed order:

    HDR|<employee_id>|<YYYY-MM>
    EARN|<description>|<rate>|<hours>|<current>     (salaried: hours blank)
    GROSS|<amount>
    WITHHELD|<label>|<amount>                       (zero or more)
    EMPLOYER|<label>|<amount>                       (zero or more)
    CONTRIB|
    NET|<amount>

``render_statement_with_checksum`` appends a trailing ``SUM|<sha256>`` line
over the preceding bytes; the gateway serves it as its v2 format.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from paycloud.core.model import (
    PayPeriod,
    format_quarter_hours,
    parse_quarter_hours,
)
from paycloud.money import Money, format_money, parse_money


class StatementError(ValueError):
    """A statement violates its structural invariants."""


class StatementParseError(ValueError):
    """Text is not a well-formed rendered statement."""


@dataclass(frozen=True)
class EarningLine:
    """One earnings row: description, rate, optional hours, line total."""

    description: str
    rate: Money
    quarter_hours: Optional[int]
    current: Money

    def __post_init__(self) -> None:
        if "|" in self.description or "\n" in self.description:
            raise StatementError("earning description may not contain '|' or newline")


@dataclass(frozen=True)
class MoneyLine:
    """A labelled amount in the withheld or employer section."""

    label: str
    current: Money

    def __post_init__(self) -> None:
        if "|" in self.label or "\n" in self.label:
            raise StatementError("line label may not contain '|' or newline")


@dataclass(frozen=True)
class EarningStatement:
    """Per-employee, per-period pay breakdown.

    Invariants (checked at construction): gross equals the sum of earning
    lines, net equals gross minus the sum of withheld lines, and employer
    lines contribute nothing to net.
    """

    employee_id: str
    period: PayPeriod
    earnings: tuple[EarningLine, ...]
    gross: Money
    withheld: tuple[MoneyLine, ...]
    employer: tuple[MoneyLine, ...]
    net: Money

    def __post_init__(self) -> None:
        if "|" in self.employee_id or "\n" in self.employee_id:
            raise StatementError("employee id may not contain '|' or newline")
        earned = sum(line.current.amount for line in self.earnings)
        if earned != self.gross.amount:
            raise StatementError(f"gross {self.gross.amount} != sum of earnings {earned}")
        deducted = sum(line.current.amount for line in self.withheld)
        if self.net.amount != self.gross.amount - deducted:
            raise StatementError(
                f"net {self.net.amount} != gross {self.gross.amount} - withheld {deducted}"
            )
        if self.net.is_negative():
            raise StatementError("net may not be negative")


class RunStatus(str, Enum):
    DONE = "done"
    DONE_WITH_WARNINGS = "done_with_warnings"


@dataclass(frozen=True)
class PayrollRun:
    """One wage-generation result for a period; statements sorted by employee id."""

    run_id: str
    period: PayPeriod
    ruleset_id: str
    status: RunStatus
    statements: tuple[EarningStatement, ...]
    warnings: tuple[str, ...]
    supersedes: Optional[str] = None
    created_at: float = 0.0

    def __post_init__(self) -> None:
        ids = [s.employee_id for s in self.statements]
        if ids != sorted(ids):
            raise StatementError("run statements must be sorted by employee_id")

    def statement_for(self, employee_id: str) -> Optional[EarningStatement]:
        for stmt in self.statements:
            if stmt.employee_id == employee_id:
                return stmt
        return None


def render_statement(stmt: EarningStatement) -> str:
    """Canonical pipe-delimited text; byte-deterministic."""
    lines = [f"HDR|{stmt.employee_id}|{stmt.period}"]
    for earn in stmt.earnings:
        hours = "" if earn.quarter_hours is None else format_quarter_hours(earn.quarter_hours)
        lines.append(f"EARN|{earn.description}|{format_money(earn.rate)}|{hours}|{format_money(earn.current)}")
    lines.append(f"GROSS|{format_money(stmt.gross)}")
    for line in stmt.withheld:
        lines.append(f"WITHHELD|{line.label}|{format_money(line.current)}")
    for line in stmt.employer:
        lines.append(f"EMPLOYER|{line.label}|{format_money(line.current)}")
    lines.append("CONTRIB|")
    lines.append(f"NET|{format_money(stmt.net)}")
    return "\n".join(lines) + "\n"


def render_statement_with_checksum(stmt: EarningStatement) -> str:
    """Canonical text plus a trailing integrity line (the gateway's v2 format)."""
    body = render_statement(stmt)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    return body + f"SUM|{digest}\n"


def parse_statement(text: str) -> EarningStatement:
    """Inverse of :func:`render_statement`.

    Accepts the canonical format and the checksum variant (the SUM line is
    validated, then dropped). render -> parse -> render is the identity.
    """
    lines = text.split("\n")
    if not lines or lines[-1] != "":
        raise StatementParseError("statement must end with a newline")
    lines = lines[:-1]
    if lines and lines[-1].startswith("SUM|"):
        body = "\n".join(lines[:-1]) + "\n"
        expect = hashlib.sha256(body.encode("utf-8")).hexdigest()
        if lines[-1] != f"SUM|{expect}":
            raise StatementParseError("statement checksum mismatch")
        lines = lines[:-1]
    if len(lines) < 4:
        raise StatementParseError("too few lines for a statement")

    def fields(line: str, kind: str, count: int) -> list[str]:
        parts = line.split("|")
        if parts[0] != kind or len(parts) != count + 1:
            raise StatementParseError(f"expected {kind} record with {count} fields: {line!r}")
        return parts[1:]

    employee_id, period_text = fields(lines[0], "HDR", 2)
    period = PayPeriod.parse(period_text)

    idx = 1
    earnings: list[EarningLine] = []
    while idx < len(lines) and lines[idx].startswith("EARN|"):
        description, rate_s, hours_s, current_s = fields(lines[idx], "EARN", 4)
        quarter_hours = None if hours_s == "" else parse_quarter_hours(hours_s)
        earnings.append(
            EarningLine(description, parse_money(rate_s), quarter_hours, parse_money(current_s))
        )
        idx += 1

    (gross_s,) = fields(lines[idx], "GROSS", 1)
    idx += 1

    withheld: list[MoneyLine] = []
    while idx < len(lines) and lines[idx].startswith("WITHHELD|"):
        label, amount_s = fields(lines[idx], "WITHHELD", 2)
        withheld.append(MoneyLine(label, parse_money(amount_s)))
        idx += 1

    employer: list[MoneyLine] = []
    while idx < len(lines) and lines[idx].startswith("EMPLOYER|"):
        label, amount_s = fields(lines[idx], "EMPLOYER", 2)
        employer.append(MoneyLine(label, parse_money(amount_s)))
        idx += 1

    if idx >= len(lines) or lines[idx] != "CONTRIB|":
        raise StatementParseError("missing CONTRIB record")
    idx += 1

    (net_s,) = fields(lines[idx], "NET", 1)
    idx += 1
    if idx != len(lines):
        raise StatementParseError(f"trailing content after NET: {lines[idx]!r}")

    try:
        return EarningStatement(
            employee_id=employee_id,
            period=period,
            earnings=tuple(earnings),
            gross=parse_money(gross_s),
            withheld=tuple(withheld),
            employer=tuple(employer),
            net=parse_money(net_s),
        )
    except StatementError as exc:
        raise StatementParseError(str(exc)) from exc


# Plain-dict codecs shared by the datastore and the HTTP wire format.

def earning_statement_to_dict(stmt: EarningStatement) -> dict:
    return {
        "employee_id": stmt.employee_id,
        "period": str(stmt.period),
        "earnings": [
            {
                "description": e.description,
                "rate": e.rate.amount,
                "quarter_hours": e.quarter_hours,
                "current": e.current.amount,
            }
            for e in stmt.earnings
        ],
        "gross": stmt.gross.amount,
        "withheld": [{"label": w.label, "current": w.current.amount} for w in stmt.withheld],
        "employer": [{"label": w.label, "current": w.current.amount} for w in stmt.employer],
        "net": stmt.net.amount,
        "currency": stmt.gross.currency,
    }


def earning_statement_from_dict(data: dict) -> EarningStatement:
    currency = data.get("currency", "NGN")
    return EarningStatement(
        employee_id=data["employee_id"],
        period=PayPeriod.parse(data["period"]),
        earnings=tuple(
            EarningLine(
                description=e["description"],
                rate=Money(int(e["rate"]), currency),
                quarter_hours=None if e["quarter_hours"] is None else int(e["quarter_hours"]),
                current=Money(int(e["current"]), currency),
            )
            for e in data["earnings"]
        ),
        gross=Money(int(data["gross"]), currency),
        withheld=tuple(MoneyLine(w["label"], Money(int(w["current"]), currency)) for w in data["withheld"]),
        employer=tuple(MoneyLine(w["label"], Money(int(w["current"]), currency)) for w in data["employer"]),
        net=Money(int(data["net"]), currency),
    )


def run_to_dict(run: PayrollRun) -> dict:
    return {
        "run_id": run.run_id,
        "period": str(run.period),
        "ruleset_id": run.ruleset_id,
        "status": run.status.value,
        "statements": [earning_statement_to_dict(s) for s in run.statements],
        "warnings": list(run.warnings),
        "supersedes": run.supersedes,
        "created_at": run.created_at,
    }


def run_from_dict(data: dict) -> PayrollRun:
    return PayrollRun(
        run_id=data["run_id"],
        period=PayPeriod.parse(data["period"]),
        ruleset_id=data["ruleset_id"],
        status=RunStatus(data["status"]),
        statements=tuple(earning_statement_from_dict(s) for s in data["statements"]),
        warnings=tuple(data["warnings"]),
        supersedes=data.get("supersedes"),
        created_at=float(data.get("created_at", 0.0)),
    )
