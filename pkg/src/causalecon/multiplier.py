"""Multiplier arithmetic: loop iteration traces and closed forms.

An injection of government purchases dG raises income by dG, then consumption
by MPC*dG, then MPC^2*dG, and so on around the reinforcing loop; the total is
the geometric sum dG/(1-MPC). A tax cut dT enters one step later, through
disposable income, so its rounds are MPC^n*dT for n >= 1 and the total is
MPC*dT/(1-MPC).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import CausalDiagram, CausalEconError, LoopPolarity
from .core import enumerate_loops as _enumerate_loops


class MpcRangeError(CausalEconError):
    """MPC must lie in [0, 1): at 1 the series diverges."""

    code = "mpc-out-of-range"


class TraceArgumentError(CausalEconError):
    code = "bad-trace-argument"


class TraceKind(enum.Enum):
    GOVERNMENT_PURCHASES = "government_purchases"
    TAX = "tax"


@dataclass(frozen=True)
class MultiplierParams:
    mpc: float
    delta_g: float = 0.0
    delta_t: float = 0.0

    def __post_init__(self):
        _check_mpc(self.mpc)
        if self.delta_g < 0:
            raise TraceArgumentError(f"delta_g must be >= 0, got {self.delta_g}")
        if self.delta_t < 0:
            raise TraceArgumentError(f"delta_t must be >= 0, got {self.delta_t}")


@dataclass(frozen=True)
class TraceRow:
    round: int
    label: str
    amount: float  # quantity printed beside the label (-dT on the tax bookkeeping row)
    contribution: float  # contribution to income this round
    cumulative: float  # running total of income contributions


@dataclass(frozen=True)
class IterationTrace:
    kind: TraceKind
    mpc: float
    delta: float
    rows: tuple[TraceRow, ...]
    closed_form_total: float

    @property
    def cumulative(self) -> float:
        return self.rows[-1].cumulative if self.rows else 0.0

    def truncation_error(self) -> float:
        """Income still to come after the last traced round."""
        return self.closed_form_total - self.cumulative


def _check_mpc(mpc: float) -> None:
    if not 0.0 <= mpc < 1.0:
        raise MpcRangeError(f"mpc must be in [0, 1), got {mpc}")


def g_multiplier(mpc: float) -> float:
    """Income change per unit increase in government purchases: 1/(1-MPC)."""
    _check_mpc(mpc)
    return 1.0 / (1.0 - mpc)


def t_multiplier(mpc: float) -> float:
    """Income change per unit decrease in taxes: MPC/(1-MPC)."""
    _check_mpc(mpc)
    return mpc / (1.0 - mpc)


def _consumption_label(n: int) -> str:
    if n == 1:
        return "First Change in Consumption"
    if n == 2:
        return "Second Change in Consumption"
    if n == 3:
        return "Third Change in Consumption"
    return f"{n}th Change in Consumption"


def trace_g(params: MultiplierParams, rounds: int) -> IterationTrace:
    """Trace the purchases injection for ``rounds`` consumption rounds.

    Row 0 is the initial injection dG; row n is the nth induced change in
    consumption MPC^n * dG.
    """
    if rounds < 1:
        raise TraceArgumentError(f"rounds must be >= 1, got {rounds}")
    mpc, dg = params.mpc, params.delta_g
    rows = [TraceRow(0, "Initial Change in Government Purchases", dg, dg, dg)]
    cumulative = dg
    for n in range(1, rounds + 1):
        contribution = mpc**n * dg
        cumulative += contribution
        rows.append(TraceRow(n, _consumption_label(n), contribution, contribution, cumulative))
    return IterationTrace(
        kind=TraceKind.GOVERNMENT_PURCHASES,
        mpc=mpc,
        delta=dg,
        rows=tuple(rows),
        closed_form_total=dg * g_multiplier(mpc),
    )


def trace_t(params: MultiplierParams, rounds: int) -> IterationTrace:
    """Trace a tax cut of dT for ``rounds`` consumption rounds.

    The leading row books the tax change itself (-dT) and contributes nothing
    to income; disposable income rises by dT, so round n adds MPC^n * dT.
    """
    if rounds < 1:
        raise TraceArgumentError(f"rounds must be >= 1, got {rounds}")
    mpc, dt = params.mpc, params.delta_t
    rows = [TraceRow(0, "Initial Change in Taxes", -dt, 0.0, 0.0)]
    cumulative = 0.0
    for n in range(1, rounds + 1):
        contribution = mpc**n * dt
        cumulative += contribution
        rows.append(TraceRow(n, _consumption_label(n), contribution, contribution, cumulative))
    return IterationTrace(
        kind=TraceKind.TAX,
        mpc=mpc,
        delta=dt,
        rows=tuple(rows),
        closed_form_total=dt * t_multiplier(mpc),
    )


def loop_consistency_check(diagram: CausalDiagram) -> bool:
    """True iff the diagram has exactly one feedback loop and it reinforces.

    This is the structural precondition for reading the diagram as a
    geometric-series multiplier mechanism.
    """
    loops = _enumerate_loops(diagram)
    return (
        not loops.truncated
        and len(loops) == 1
        and loops[0].polarity is LoopPolarity.REINFORCING
    )
