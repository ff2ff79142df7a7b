import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paycloud.core import (
    FIG2_NG,
    AnnualContract,
    Employee,
    EmployeeStatus,
    FlatAmount,
    HourlyRate,
    HoursForbidden,
    HoursRequired,
    MonthlySalary,
    NegativeNet,
    PayPeriod,
    PayRule,
    Payer,
    PercentOfGross,
    RetroactiveChange,
    RuleSet,
    TimeCard,
    apply_employee_change,
    apply_rules,
    compensation_at,
    compute_gross,
    run_payroll,
    status_at,
    verify_timecard,
)
from paycloud.core.engine import make_change
from paycloud.money import Money

from .oracles import oracle_effective, oracle_run, random_instance, statement_as_tuple

JUNE = PayPeriod(2021, 6)
JULY = PayPeriod(2021, 7)

EMPTY_RULES = RuleSet(id="empty", rules=())


class TestComputeGross:
    def test_hourly_figure2(self):
        assert compute_gross(HourlyRate(Money(250000)), 180) == Money(11_250_000)

    def test_hourly_zero_hours(self):
        assert compute_gross(HourlyRate(Money(250000)), 0) == Money(0)

    def test_annual_contract_rounds_half_up(self):
        # oracle: 10,000,000 / 12 = 833,333.33.. kobo -> 833,333
        assert compute_gross(AnnualContract(Money(10_000_000))) == Money(833_333)

    def test_monthly_salary_passthrough(self):
        assert compute_gross(MonthlySalary(Money(5_000_000))) == Money(5_000_000)

    def test_hourly_without_hours(self):
        with pytest.raises(HoursRequired):
            compute_gross(HourlyRate(Money(250000)))

    @pytest.mark.parametrize("comp", [MonthlySalary(Money(100)), AnnualContract(Money(100))])
    def test_salaried_with_hours(self, comp):
        with pytest.raises(HoursForbidden):
            compute_gross(comp, 4)

    @given(
        rate=st.integers(min_value=0, max_value=10_000_000),
        h1=st.integers(min_value=0, max_value=1000),
        h2=st.integers(min_value=0, max_value=1000),
    )
    def test_hourly_linear_in_whole_quarter_hours(self, rate, h1, h2):
        comp = HourlyRate(Money(rate * 4))  # whole minor-unit rate per quarter-hour
        total = compute_gross(comp, h1 + h2)
        assert total == compute_gross(comp, h1) + compute_gross(comp, h2)


class TestApplyRules:
    def test_figure2_breakdown(self):
        breakdown = apply_rules(Money(11_250_000), FIG2_NG)
        assert [(w.label, w.current.amount) for w in breakdown.withheld] == [
            ("Federal Income Tax", 1_125_000),
            ("Fees & Tolls", 25_000),
            ("State Income Tax", 25_000),
        ]
        assert [(e.label, e.current.amount) for e in breakdown.employer] == [
            ("Medicare", 40_000),
            ("Insurance", 30_000),
        ]
        # independent sum: 112,500.00 - (11,250.00 + 250.00 + 250.00)
        assert breakdown.net == Money(11_250_000 - 1_125_000 - 25_000 - 25_000)
        assert breakdown.net == Money(10_075_000)

    def test_empty_ruleset(self):
        breakdown = apply_rules(Money(5_000_000), EMPTY_RULES)
        assert breakdown.withheld == ()
        assert breakdown.employer == ()
        assert breakdown.net == Money(5_000_000)

    def test_negative_net_rejected(self):
        # FIG2-NG flat withheld lines total 500.00 > 0.00 gross
        with pytest.raises(NegativeNet):
            apply_rules(Money(0), FIG2_NG)

    def test_rejects_negative_gross(self):
        with pytest.raises(ValueError):
            apply_rules(Money(-1), FIG2_NG)

    @given(
        gross=st.integers(min_value=0, max_value=10**10),
        employer_amount=st.integers(min_value=0, max_value=10**8),
    )
    def test_employer_rules_never_change_net(self, gross, employer_amount):
        base = RuleSet(id="base", rules=(PayRule("p", "Tax", Payer.EMPLOYEE_WITHHELD, PercentOfGross(900)),))
        extended = RuleSet(
            id="ext",
            rules=base.rules
            + (PayRule("er", "Employer levy", Payer.EMPLOYER_TAX, FlatAmount(Money(employer_amount))),),
        )
        assert apply_rules(Money(gross), base).net == apply_rules(Money(gross), extended).net

    @given(gross=st.integers(min_value=0, max_value=10**10), bp=st.integers(min_value=0, max_value=10000))
    def test_net_plus_withheld_equals_gross(self, gross, bp):
        rules = RuleSet(id="one", rules=(PayRule("p", "Tax", Payer.EMPLOYEE_WITHHELD, PercentOfGross(bp)),))
        breakdown = apply_rules(Money(gross), rules)
        assert breakdown.net.amount + sum(w.current.amount for w in breakdown.withheld) == gross


class TestVerifyTimecard:
    def test_pass_case(self, fig2_employee):
        card = TimeCard("e1", JUNE, 180, approved=True)
        verified, errors = verify_timecard(card, [fig2_employee], [])
        assert errors == []
        assert verified is not None and verified.verified

    def test_negative_hours(self, fig2_employee):
        _, errors = verify_timecard(TimeCard("e1", JUNE, -4), [fig2_employee], [])
        assert "NegativeHours" in errors

    def test_excessive_hours(self, fig2_employee):
        # June has 30 days: cap is 720h = 2880 quarter-hours; 800h = 3200
        _, errors = verify_timecard(TimeCard("e1", JUNE, 3200), [fig2_employee], [])
        assert errors == ["ExcessiveHours"]
        ok, errors = verify_timecard(TimeCard("e1", JUNE, 2880), [fig2_employee], [])
        assert errors == [] and ok is not None

    def test_unknown_employee(self):
        _, errors = verify_timecard(TimeCard("ghost", JUNE, 4), [], [])
        assert errors == ["UnknownEmployee"]

    def test_inactive_employee(self, fig2_employee):
        terminated = apply_employee_change(
            fig2_employee,
            make_change(fig2_employee, JUNE, "left", new_status=EmployeeStatus.TERMINATED),
        )
        _, errors = verify_timecard(TimeCard("e1", JUNE, 4), [terminated], [])
        assert errors == ["InactiveEmployee"]
        # a card for a period before the termination is fine
        ok, errors = verify_timecard(TimeCard("e1", PayPeriod(2021, 5), 4), [terminated], [])
        assert errors == [] and ok is not None

    def test_duplicate_timecard(self, fig2_employee, fig2_timecard):
        _, errors = verify_timecard(TimeCard("e1", JUNE, 4), [fig2_employee], [fig2_timecard])
        assert errors == ["DuplicateTimeCard"]

    def test_multiple_errors_reported_together(self):
        _, errors = verify_timecard(TimeCard("ghost", JUNE, -4), [], [])
        assert set(errors) == {"NegativeHours", "UnknownEmployee"}


class TestRunPayroll:
    def test_figure2_run(self, fig2_run):
        assert fig2_run.status.value == "done"
        assert fig2_run.warnings == ()
        stmt = fig2_run.statements[0]
        assert stmt.gross == Money(11_250_000)
        assert stmt.net == Money(10_075_000)
        assert stmt.earnings[0].description == "Regular pay"
        assert stmt.earnings[0].quarter_hours == 180

    def test_zero_active_employees(self):
        run = run_payroll(JUNE, [], [], FIG2_NG, run_id="r0")
        assert run.statements == ()
        assert run.status.value == "done"

    def test_statements_sorted_and_deterministic(self):
        employees = [
            Employee(id=i, name=i, compensation=MonthlySalary(Money(5_000_000))) for i in ("c", "a", "b")
        ]
        first = run_payroll(JUNE, employees, [], EMPTY_RULES, run_id="r1")
        second = run_payroll(JUNE, list(reversed(employees)), [], EMPTY_RULES, run_id="r1")
        assert [s.employee_id for s in first.statements] == ["a", "b", "c"]
        assert first.statements == second.statements
        assert first == second

    def test_hourly_without_card_skipped_with_warning(self, fig2_employee):
        run = run_payroll(JUNE, [fig2_employee], [], FIG2_NG, run_id="r2")
        assert run.statements == ()
        assert any("no approved time card" in w for w in run.warnings)
        assert run.status.value == "done_with_warnings"

    def test_unapproved_card_excluded_with_warning(self, fig2_employee):
        card = TimeCard("e1", JUNE, 180, approved=False, verified=True)
        run = run_payroll(JUNE, [fig2_employee], [card], FIG2_NG, run_id="r3")
        assert run.statements == ()
        assert any("unapproved" in w for w in run.warnings)

    def test_multiple_cards_summed(self, fig2_employee):
        cards = [
            TimeCard("e1", JUNE, 100, approved=True, verified=True),
            TimeCard("e1", JUNE, 80, approved=True, verified=True),
        ]
        run = run_payroll(JUNE, [fig2_employee], cards, FIG2_NG, run_id="r4")
        assert run.statements[0].gross == Money(11_250_000)

    def test_negative_net_employee_skipped(self):
        emp = Employee(id="z", name="Z", compensation=MonthlySalary(Money(100)))
        run = run_payroll(JUNE, [emp], [], FIG2_NG, run_id="r5")
        assert run.statements == ()
        assert any("withholdings exceed gross" in w for w in run.warnings)

    def test_terminated_employee_excluded(self, fig2_employee, fig2_timecard):
        terminated = apply_employee_change(
            fig2_employee,
            make_change(fig2_employee, JUNE, "left", new_status=EmployeeStatus.TERMINATED),
        )
        run = run_payroll(JUNE, [terminated], [fig2_timecard], FIG2_NG, run_id="r6")
        assert run.statements == ()


class TestEmployeeChanges:
    def test_effective_dating_on_rate_change(self, fig2_employee):
        changed = apply_employee_change(
            fig2_employee,
            make_change(fig2_employee, JULY, "raise", new_compensation=HourlyRate(Money(260000))),
        )
        assert compensation_at(changed, JUNE) == HourlyRate(Money(250000))
        assert compensation_at(changed, JULY) == HourlyRate(Money(260000))

        cards = [
            TimeCard("e1", JUNE, 180, approved=True, verified=True),
            TimeCard("e1", JULY, 180, approved=True, verified=True),
        ]
        june_run = run_payroll(JUNE, [changed], cards, EMPTY_RULES, run_id="a")
        july_run = run_payroll(JULY, [changed], cards, EMPTY_RULES, run_id="b")
        assert june_run.statements[0].gross == Money(11_250_000)  # 2500.00 x 45
        assert july_run.statements[0].gross == Money(11_700_000)  # 2600.00 x 45

    def test_termination_change(self, fig2_employee):
        terminated = apply_employee_change(
            fig2_employee,
            make_change(fig2_employee, JULY, "left", new_status=EmployeeStatus.TERMINATED),
        )
        assert status_at(terminated, JUNE) is EmployeeStatus.ACTIVE
        assert status_at(terminated, JULY) is EmployeeStatus.TERMINATED

    def test_identical_value_change_bumps_version(self, fig2_employee):
        changed = apply_employee_change(
            fig2_employee,
            make_change(fig2_employee, JUNE, "no-op", new_compensation=fig2_employee.compensation),
        )
        assert changed.version == 2
        assert changed.compensation == fig2_employee.compensation

    def test_retroactive_change_rejected(self, fig2_employee):
        changed = apply_employee_change(fig2_employee, make_change(fig2_employee, JULY, "raise"))
        with pytest.raises(RetroactiveChange):
            apply_employee_change(changed, make_change(changed, JUNE, "too late"))

    def test_same_period_change_allowed_later_wins(self, fig2_employee):
        first = apply_employee_change(
            fig2_employee,
            make_change(fig2_employee, JULY, "raise", new_compensation=HourlyRate(Money(260000))),
        )
        second = apply_employee_change(
            first,
            make_change(first, JULY, "correction", new_compensation=HourlyRate(Money(270000))),
        )
        assert compensation_at(second, JULY) == HourlyRate(Money(270000))

    def test_effective_dating_matches_linear_scan_oracle(self):
        rng = random.Random(7)
        for _ in range(200):
            _, employees, _, _ = random_instance(rng, max_employees=3)
            for emp in employees:
                for month in range(1, 13):
                    period = PayPeriod(2021, month)
                    status, comp = oracle_effective(emp, period)
                    assert status_at(emp, period) == status
                    assert compensation_at(emp, period) == comp


class TestOracleEquivalence:
    def test_randomized_runs_match_brute_force(self):
        rng = random.Random(42)
        for _ in range(150):
            period, employees, timecards, ruleset = random_instance(rng)
            run = run_payroll(period, employees, timecards, ruleset, run_id="x")
            assert [statement_as_tuple(s) for s in run.statements] == oracle_run(
                period, employees, timecards, ruleset
            )
            for stmt in run.statements:
                withheld_total = sum(w.current.amount for w in stmt.withheld)
                assert stmt.net.amount + withheld_total == stmt.gross.amount
