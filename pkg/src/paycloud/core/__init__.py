"""Pure, deterministic payroll computation: domain model, rule engine, statements."""

from paycloud.core.engine import (
    HoursForbidden,
    HoursRequired,
    NegativeNet,
    RetroactiveChange,
    RuleBreakdown,
    apply_employee_change,
    apply_rules,
    compensation_at,
    compute_gross,
    run_payroll,
    status_at,
    verify_timecard,
)
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
    PayRule,
    Payer,
    PercentOfGross,
    RuleSet,
    TimeCard,
)
from paycloud.core.rulesets import FIG2_NG, builtin_rulesets
from paycloud.core.statement import (
    EarningLine,
    EarningStatement,
    MoneyLine,
    PayrollRun,
    RunStatus,
    StatementParseError,
    parse_statement,
    render_statement,
    render_statement_with_checksum,
)

__all__ = [
    "AnnualContract",
    "Compensation",
    "EarningLine",
    "EarningStatement",
    "Employee",
    "EmployeeChange",
    "EmployeeStatus",
    "FIG2_NG",
    "FlatAmount",
    "HourlyRate",
    "HoursForbidden",
    "HoursRequired",
    "MoneyLine",
    "MonthlySalary",
    "NegativeNet",
    "PayPeriod",
    "PayRule",
    "Payer",
    "PayrollRun",
    "PercentOfGross",
    "RetroactiveChange",
    "RuleBreakdown",
    "RuleSet",
    "RunStatus",
    "StatementParseError",
    "TimeCard",
    "apply_employee_change",
    "apply_rules",
    "builtin_rulesets",
    "compensation_at",
    "compute_gross",
    "parse_statement",
    "render_statement",
    "render_statement_with_checksum",
    "run_payroll",
    "status_at",
    "verify_timecard",
]
