"""Built-in diagrams shipped with the toolkit.

Three classroom models: the price/revenue example, the documented subgraph of
the national income model, and the eight-variable multiplier loop. Edge lists
follow the narratives the source materials actually state, never guesses.
"""

from __future__ import annotations

from .core import CausalDiagram, CausalEdge, Polarity, Variable, build_diagram

POS = Polarity.POSITIVE
NEG = Polarity.NEGATIVE


def price_revenue() -> CausalDiagram:
    """Two competing chains from price to revenue: per-item revenue up, sales down."""
    return build_diagram(
        "price_revenue",
        [
            Variable("price", "Price"),
            Variable("marginal_revenue", "Marginal Revenue"),
            Variable("sales", "Sales"),
            Variable("revenue", "Revenue"),
        ],
        [
            CausalEdge("price", "marginal_revenue", POS),
            CausalEdge("marginal_revenue", "revenue", POS),
            CausalEdge("price", "sales", NEG),
            CausalEdge("sales", "revenue", POS),
        ],
    )


def national_income_subset() -> CausalDiagram:
    """Documented subgraph of the national income model.

    14 variables, 13 edges: production inputs feed national output and income,
    taxes cut disposable income, savings aggregate into the loanable-funds
    market, and the interest rate feeds private savings back in (a balancing
    loop). Financial-system variables carry the ``financial`` group tag.
    """
    fin = "financial"
    return build_diagram(
        "national_income_subset",
        [
            Variable("technology", "Technology"),
            Variable("capital", "Capital", symbol="K"),
            Variable("labor", "Labor", symbol="L"),
            Variable("output", "National Output", symbol="Y"),
            Variable("national_income", "National Income"),
            Variable("disposable_income", "Disposable Income"),
            Variable("taxes", "Taxes", symbol="T"),
            Variable("consumption", "Consumption", symbol="C"),
            Variable("government_purchases", "Government Purchases", symbol="G"),
            Variable("public_savings", "Public Savings", group=fin),
            Variable("private_savings", "Private Savings", group=fin),
            Variable("national_savings", "National Savings", group=fin),
            Variable("loanable_funds_supply", "Supply of Loanable Funds", group=fin),
            Variable("interest_rate", "Interest Rate", symbol="r", group=fin),
        ],
        [
            CausalEdge("technology", "output", POS),
            CausalEdge("capital", "output", POS),
            CausalEdge("labor", "output", POS),
            CausalEdge("output", "national_income", POS),
            CausalEdge("national_income", "disposable_income", POS),
            CausalEdge("taxes", "disposable_income", NEG),
            CausalEdge("disposable_income", "consumption", POS),
            CausalEdge("government_purchases", "public_savings", NEG),
            CausalEdge("public_savings", "national_savings", POS),
            CausalEdge("private_savings", "national_savings", POS),
            CausalEdge("national_savings", "loanable_funds_supply", POS),
            CausalEdge("loanable_funds_supply", "interest_rate", NEG),
            CausalEdge("interest_rate", "private_savings", POS),
        ],
    )


def multiplier() -> CausalDiagram:
    """The multiplier mechanism: 8 variables, 8 edges, one negative arrow.

    The reinforcing loop runs planned expenditure -> income -> disposable
    income -> consumption -> planned expenditure.
    """
    return build_diagram(
        "multiplier",
        [
            Variable("g", "Government Purchases", symbol="G"),
            Variable("i", "Planned Investment", symbol="I"),
            Variable("t", "Taxes", symbol="T"),
            Variable("y", "National Income", symbol="Y"),
            Variable("y_minus_t", "Disposable Income", symbol="Y-T"),
            Variable("c", "Consumption", symbol="C"),
            Variable("pe", "Planned Expenditure", symbol="PE"),
            Variable("mpc", "Marginal Propensity to Consume", symbol="MPC"),
        ],
        [
            CausalEdge("g", "pe", POS),
            CausalEdge("i", "pe", POS),
            CausalEdge("t", "y_minus_t", NEG),
            CausalEdge("y", "y_minus_t", POS),
            CausalEdge("y_minus_t", "c", POS),
            CausalEdge("mpc", "c", POS),
            CausalEdge("c", "pe", POS),
            CausalEdge("pe", "y", POS),
        ],
    )


FIXTURES = {
    "price_revenue": price_revenue,
    "national_income_subset": national_income_subset,
    "multiplier": multiplier,
}


def fixture_names() -> list[str]:
    return sorted(FIXTURES)


def fixture(name: str) -> CausalDiagram:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}") from None
