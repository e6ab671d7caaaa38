"""Multi-currency prices with fixed and percentage discounts.

This is the demo domain shipped with exemplar: a tiny model, an example suite
built on it, and ``overview`` views for both kinds of price. Money is stored
as integer minor units (cents) so equality is exact; percentage discounts are
expressed in basis points and rounded half-to-even at every stage.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .core import ExampleRegistry, example
from .errors import ExemplarError
from .runner import ExampleValue
from .views import Composite, Table, Text, ViewRegistry

_CURRENCY_RE = re.compile(r"[A-Z]{3}\Z")


class CurrencyMismatch(ExemplarError):
    def __init__(self, price_currency: str, discount_currency: str):
        self.price_currency = price_currency
        self.discount_currency = discount_currency
        super().__init__(f"cannot discount a {price_currency} price by {discount_currency}")


class NegativePrice(ExemplarError):
    pass


@dataclass(frozen=True)
class Money:
    amount_minor: int
    currency: str

    def __post_init__(self):
        if not isinstance(self.amount_minor, int) or isinstance(self.amount_minor, bool):
            raise TypeError("amount_minor must be an int")
        if not isinstance(self.currency, str) or not _CURRENCY_RE.match(self.currency):
            raise ValueError(f"invalid currency code: {self.currency!r}")

    def __str__(self):
        sign = "-" if self.amount_minor < 0 else ""
        units, cents = divmod(abs(self.amount_minor), 100)
        return f"{sign}{units}.{cents:02d} {self.currency}"


def euros(amount: int) -> Money:
    return Money(amount * 100, "EUR")


@dataclass(frozen=True)
class FixedDiscount:
    money: Money

    def __post_init__(self):
        if self.money.amount_minor < 0:
            raise ValueError("a fixed discount cannot be negative")

    def __str__(self):
        return f"less {self.money}"


@dataclass(frozen=True)
class PercentDiscount:
    basis_points: int

    def __post_init__(self):
        bp = self.basis_points
        if not isinstance(bp, int) or isinstance(bp, bool) or not 0 <= bp <= 10000:
            raise ValueError(f"basis points must be an int in [0, 10000], got {bp!r}")

    def __str__(self):
        whole, frac = divmod(self.basis_points, 100)
        pct = f"{whole}" if frac == 0 else f"{whole}.{frac:02d}".rstrip("0")
        return f"less {pct}%"


Discount = Union[FixedDiscount, PercentDiscount]


@dataclass(frozen=True)
class ConcretePrice:
    money: Money

    def __str__(self):
        return str(self.money)


@dataclass(frozen=True)
class DiscountedPrice:
    base: Price
    discount: Discount

    def __str__(self):
        return f"({self.base}) {self.discount}"


Price = Union[ConcretePrice, DiscountedPrice]


def as_price(m: Money) -> ConcretePrice:
    return ConcretePrice(m)


def currency_of(p: Price) -> str:
    while isinstance(p, DiscountedPrice):
        p = p.base
    return p.money.currency


def discounted_by(p: Price, d: Discount) -> DiscountedPrice:
    if isinstance(d, FixedDiscount) and d.money.currency != currency_of(p):
        raise CurrencyMismatch(currency_of(p), d.money.currency)
    return DiscountedPrice(p, d)


def _scale_half_even(amount: int, keep_bp: int) -> int:
    q, r = divmod(amount * keep_bp, 10000)
    if 2 * r > 10000 or (2 * r == 10000 and q % 2 == 1):
        q += 1
    return q


def _apply(total: Money, d: Discount) -> Money:
    if isinstance(d, FixedDiscount):
        remaining = total.amount_minor - d.money.amount_minor
        if remaining < 0:
            raise NegativePrice(f"discount of {d.money} exceeds price of {total}")
        return Money(remaining, total.currency)
    return Money(_scale_half_even(total.amount_minor, 10000 - d.basis_points), total.currency)


def stages(p: Price) -> list[tuple[Price, Money]]:
    """Each layer of *p* from the base outward, with the running total."""
    layers = []
    while isinstance(p, DiscountedPrice):
        layers.append(p)
        p = p.base
    total = p.money
    out: list[tuple[Price, Money]] = [(p, total)]
    for layer in reversed(layers):
        total = _apply(total, layer.discount)
        out.append((layer, total))
    return out


def total_value(p: Price) -> Money:
    return stages(p)[-1][1]


def price_overview(p: Price):
    if isinstance(p, ConcretePrice):
        return Composite("Price", (Text(str(p.money)), Text("a fixed amount of money")))
    rows = []
    for layer, total in stages(p):
        step = "base" if isinstance(layer, ConcretePrice) else str(layer.discount)
        rows.append((step, str(total)))
    return Table(("step", "price"), tuple(rows))


def price_structure(p: Price) -> list[tuple[str, str]]:
    if isinstance(p, ConcretePrice):
        return [("money", str(p.money))]
    return [("base", str(p.base)), ("discount", str(p.discount))]


def price_value(p: Price) -> ExampleValue:
    return ExampleValue(type(p).__name__, p, structure=price_structure)


def demo_views() -> ViewRegistry:
    views = ViewRegistry()
    for tag in ("ConcretePrice", "DiscountedPrice"):
        views = views.register(tag, "overview", lambda v: price_overview(v.payload))
    return views


@example("prices.hundredEuros")
def hundred_euros():
    """A concrete price of 100 EUR."""
    p = as_price(euros(100))
    assert p == as_price(euros(100))
    return price_value(p)


@example("prices.discountedFixed", deps=["prices.hundredEuros"])
def discounted_fixed(price):
    """100 EUR less a fixed 20 EUR."""
    p = discounted_by(price, FixedDiscount(euros(20)))
    assert total_value(p) == euros(80)
    return price_value(p)


@example("prices.discountedTwice", deps=["prices.discountedFixed"])
def discounted_twice(price):
    """Fixed discount first, then 10% off."""
    p = discounted_by(price, PercentDiscount(1000))
    assert total_value(p) == euros(72)
    return price_value(p)


@example("prices.zeroPercentIdentity", deps=["prices.hundredEuros"])
def zero_percent_identity(price):
    """A 0% discount leaves the total unchanged."""
    p = discounted_by(price, PercentDiscount(0))
    assert total_value(p) == total_value(price)
    return price_value(p)


def demo_suite() -> ExampleRegistry:
    return ExampleRegistry.of(
        hundred_euros, discounted_fixed, discounted_twice, zero_percent_identity
    )
