"""Built-in rulesets.

FIG2-NG reproduces the demo earning statement: a 10% federal income tax on
gross, two flat withheld fees, and two flat employer-tax lines.
"""
from __future__ import annotations

from paycloud.core.model import FlatAmount, PayRule, Payer, PercentOfGross, RuleSet
from paycloud.money import Money

FIG2_NG = RuleSet(
    id="FIG2-NG",
    rules=(
        PayRule("federal-income-tax", "Federal Income Tax", Payer.EMPLOYEE_WITHHELD, PercentOfGross(1000)),
        PayRule("fees-and-tolls", "Fees & Tolls", Payer.EMPLOYEE_WITHHELD, FlatAmount(Money(25000))),
        PayRule("state-income-tax", "State Income Tax", Payer.EMPLOYEE_WITHHELD, FlatAmount(Money(25000))),
        PayRule("medicare", "Medicare", Payer.EMPLOYER_TAX, FlatAmount(Money(40000))),
        PayRule("insurance", "Insurance", Payer.EMPLOYER_TAX, FlatAmount(Money(30000))),
    ),
)


def builtin_rulesets() -> dict[str, RuleSet]:
    return {FIG2_NG.id: FIG2_NG}
