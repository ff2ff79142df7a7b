import pytest

from paycloud.core import (
    FIG2_NG,
    Employee,
    HourlyRate,
    PayPeriod,
    TimeCard,
    run_payroll,
)
from paycloud.money import Money

FIG2_PERIOD = PayPeriod(2021, 6)


@pytest.fixture
def fig2_employee() -> Employee:
    """Hourly employee at 2,500.00/hr, matching the demo statement."""
    return Employee(id="e1", name="Adaeze Obi", compensation=HourlyRate(Money(250000)))


@pytest.fixture
def fig2_timecard() -> TimeCard:
    """45 hours (180 quarter-hours), approved and verified."""
    return TimeCard(
        employee_id="e1",
        period=FIG2_PERIOD,
        quarter_hours=180,
        approved=True,
        verified=True,
    )


@pytest.fixture
def fig2_run(fig2_employee, fig2_timecard):
    return run_payroll(
        period=FIG2_PERIOD,
        employees=[fig2_employee],
        timecards=[fig2_timecard],
        ruleset=FIG2_NG,
        run_id="run-fig2",
    )


@pytest.fixture
def fig2_statement(fig2_run):
    assert len(fig2_run.statements) == 1
    return fig2_run.statements[0]
