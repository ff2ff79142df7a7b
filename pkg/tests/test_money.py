from fractions import Fraction
from math import floor

import pytest
from hypothesis import given
from hypothesis import strategies as st

from paycloud.money import (
    CurrencyMismatch,
    Money,
    MoneyFormatError,
    div_round_half_up,
    format_money,
    kobo,
    naira,
    parse_money,
)


def rational_half_up(numerator: int, denominator: int) -> int:
    # Independent oracle: exact Fraction arithmetic.
    return floor(Fraction(numerator, denominator) + Fraction(1, 2))


@pytest.mark.parametrize(
    "num,den,expected",
    [
        (10_000_000, 12, 833_333),  # annual contract twelfth: 833333.33.. rounds down
        (5, 2, 3),  # exact tie rounds up
        (1, 3, 0),
        (2, 3, 1),
        (0, 7, 0),
        (250000 * 180, 4, 11_250_000),  # 2500.00/hr x 45.00h, exact
    ],
)
def test_div_round_half_up_known_values(num, den, expected):
    assert div_round_half_up(num, den) == expected
    assert rational_half_up(num, den) == expected


@given(st.integers(min_value=0, max_value=10**12), st.integers(min_value=1, max_value=10**6))
def test_div_round_half_up_matches_fraction_oracle(num, den):
    assert div_round_half_up(num, den) == rational_half_up(num, den)


def test_div_round_half_up_rejects_negatives():
    with pytest.raises(ValueError):
        div_round_half_up(-1, 2)
    with pytest.raises(ValueError):
        div_round_half_up(1, 0)


def test_arithmetic_is_exact_integer():
    assert (kobo(100) + kobo(250)).amount == 350
    assert (kobo(100) - kobo(250)).amount == -150
    assert kobo(100) < kobo(101)
    assert kobo(101) >= kobo(101)


def test_currency_mismatch_raises():
    with pytest.raises(CurrencyMismatch):
        Money(1, "NGN") + Money(1, "USD")
    with pytest.raises(CurrencyMismatch):
        Money(1, "NGN") < Money(1, "USD")


def test_amount_must_be_int():
    with pytest.raises(TypeError):
        Money(1.5)  # type: ignore[arg-type]
    with pytest.raises(TypeError):
        Money(True)  # type: ignore[arg-type]


@pytest.mark.parametrize(
    "amount,text",
    [(11_250_000, "112500.00"), (25_000, "250.00"), (0, "0.00"), (5, "0.05"), (-150, "-1.50")],
)
def test_format_money(amount, text):
    assert format_money(Money(amount)) == text


@given(st.integers(min_value=-(10**12), max_value=10**12))
def test_format_parse_roundtrip(amount):
    m = Money(amount)
    assert parse_money(format_money(m)) == m


@pytest.mark.parametrize("bad", ["", "1", "1.2", "1.234", "1,00", "a.bc", "1.2.3"])
def test_parse_money_rejects_inexact_text(bad):
    with pytest.raises(MoneyFormatError):
        parse_money(bad)


def test_naira_constructor():
    assert naira(2500).amount == 250000
    assert naira(8333, 33).amount == 833333
    with pytest.raises(MoneyFormatError):
        naira(1, 100)
