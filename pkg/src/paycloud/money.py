"""Exact money arithmetic in integer minor currency units (kobo).

All monetary values in the system are whole numbers of minor units; no
floating point touches a money path. The single rounding rule, half-up,
lives in :func:`div_round_half_up`.
"""
from __future__ import annotations

from dataclasses import dataclass

DEFAULT_CURRENCY = "NGN"
MINOR_PER_MAJOR = 100


class CurrencyMismatch(ValueError):
    """Two amounts in different currencies were combined."""


class MoneyFormatError(ValueError):
    """Text does not denote an exact two-decimal amount."""


def div_round_half_up(numerator: int, denominator: int) -> int:
    """Integer division of non-negative ``numerator / denominator``, ties round up.

    Exact: floor(n/d + 1/2) computed without floats.
    """
    if numerator < 0 or denominator <= 0:
        raise ValueError(f"require numerator >= 0 and denominator > 0, got {numerator}/{denominator}")
    return (2 * numerator + denominator) // (2 * denominator)


@dataclass(frozen=True)
class Money:
    """An exact amount of minor currency units."""

    amount: int
    currency: str = DEFAULT_CURRENCY

    def __post_init__(self) -> None:
        if not isinstance(self.amount, int) or isinstance(self.amount, bool):
            raise TypeError(f"money amount must be an int of minor units, got {type(self.amount).__name__}")

    def _same_currency(self, other: "Money") -> None:
        if self.currency != other.currency:
            raise CurrencyMismatch(f"{self.currency} vs {other.currency}")

    def __add__(self, other: "Money") -> "Money":
        self._same_currency(other)
        return Money(self.amount + other.amount, self.currency)

    def __sub__(self, other: "Money") -> "Money":
        self._same_currency(other)
        return Money(self.amount - other.amount, self.currency)

    def __lt__(self, other: "Money") -> bool:
        self._same_currency(other)
        return self.amount < other.amount

    def __le__(self, other: "Money") -> bool:
        self._same_currency(other)
        return self.amount <= other.amount

    def __gt__(self, other: "Money") -> bool:
        self._same_currency(other)
        return self.amount > other.amount

    def __ge__(self, other: "Money") -> bool:
        self._same_currency(other)
        return self.amount >= other.amount

    def scale(self, numerator: int, denominator: int) -> "Money":
        """Multiply by an exact non-negative ratio, rounding half-up to the minor unit."""
        return Money(div_round_half_up(self.amount * numerator, denominator), self.currency)

    def is_negative(self) -> bool:
        return self.amount < 0

    def __str__(self) -> str:
        return f"{format_money(self)} {self.currency}"


def zero(currency: str = DEFAULT_CURRENCY) -> Money:
    return Money(0, currency)


def kobo(amount: int) -> Money:
    """Shorthand constructor used throughout tests and fixtures."""
    return Money(amount)


def naira(major: int, minor: int = 0) -> Money:
    """Build a Money from major units plus optional minor units."""
    if minor < 0 or minor >= MINOR_PER_MAJOR:
        raise MoneyFormatError(f"minor part out of range: {minor}")
    sign = -1 if major < 0 else 1
    return Money(major * MINOR_PER_MAJOR + sign * minor)


def format_money(m: Money) -> str:
    """Render with exactly two decimals, e.g. ``112500.00``."""
    a = m.amount
    sign = "-" if a < 0 else ""
    a = abs(a)
    return f"{sign}{a // MINOR_PER_MAJOR}.{a % MINOR_PER_MAJOR:02d}"


def parse_money(text: str, currency: str = DEFAULT_CURRENCY) -> Money:
    """Inverse of :func:`format_money`; rejects anything but exact two-decimal text."""
    t = text.strip()
    sign = 1
    if t.startswith("-"):
        sign = -1
        t = t[1:]
    major, dot, minor = t.partition(".")
    if not dot or len(minor) != 2 or not major.isdigit() or not minor.isdigit():
        raise MoneyFormatError(f"not a two-decimal amount: {text!r}")
    return Money(sign * (int(major) * MINOR_PER_MAJOR + int(minor)), currency)
