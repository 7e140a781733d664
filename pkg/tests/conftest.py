from __future__ import annotations

import pytest

from causalecon.fixtures import multiplier, national_income_subset, price_revenue
from causalecon.formats import ParseDiagnostic


@pytest.fixture
def price_revenue_diagram():
    return price_revenue()


@pytest.fixture
def national_income_diagram():
    return national_income_subset()


@pytest.fixture
def multiplier_diagram():
    return multiplier()


def assert_span_in_bounds(diagnostic: ParseDiagnostic, text: str) -> None:
    """A span must point inside the input (the end-of-line position counts,
    so 'expected more here' errors stay legal)."""
    lines = [line[:-1] if line.endswith("\r") else line for line in text.split("\n")]
    span = diagnostic.span
    assert 1 <= span.line <= len(lines), f"line {span.line} outside 1..{len(lines)}"
    line = lines[span.line - 1]
    assert span.column >= 1
    assert span.length >= 1
    assert span.column - 1 + span.length <= len(line) + 1, (
        f"span {span} overruns line of length {len(line)}"
    )
