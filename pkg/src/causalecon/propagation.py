"""Qualitative what-if queries by simple-path sign analysis.

Given a signed shock to one variable, the response of a target is derived
from the sign products of all simple directed paths between them, the same
chain-tracing a reader performs on the diagram by hand:

* no path at all (and target is not the shocked variable): no effect;
* every path carries the same sign: that sign composed with the shock;
* paths of both signs exist: indeterminate ("cannot be determined").

Paths never repeat a variable and never pass through frozen (held-constant)
variables. Cycles therefore do not feed back: a direct positive arrow stays a
definite answer even when the arrow sits on a balancing loop.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import CausalDiagram, CausalEdge, CausalEconError, Polarity, sign_product

DEFAULT_PATH_BUDGET = 100_000


class UnknownVariableError(CausalEconError):
    code = "unknown-variable"


class ShockedVariableFrozenError(CausalEconError):
    code = "shocked-variable-frozen"


class PathBudgetExceededError(CausalEconError):
    """The simple-path count crossed the budget; refusing to answer beats
    answering from a silently truncated path set."""

    code = "path-budget-exceeded"


class Direction(enum.Enum):
    INCREASE = "increase"
    DECREASE = "decrease"

    def flipped(self) -> "Direction":
        return Direction.DECREASE if self is Direction.INCREASE else Direction.INCREASE


class Outcome(enum.Enum):
    INCREASE = "increase"
    DECREASE = "decrease"
    NO_EFFECT = "no_effect"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Shock:
    variable: str
    direction: Direction


@dataclass(frozen=True)
class WitnessPath:
    """One simple directed path with its sign product.

    The empty path (the identity witness when target == shocked variable)
    has a positive sign.
    """

    edges: tuple[CausalEdge, ...]
    sign: Polarity

    @property
    def variables(self) -> tuple[str, ...]:
        if not self.edges:
            return ()
        return (self.edges[0].source,) + tuple(e.target for e in self.edges)


@dataclass(frozen=True)
class PropagationVerdict:
    target: str
    outcome: Outcome
    witness_paths: tuple[WitnessPath, ...]


def _check_query(
    diagram: CausalDiagram, shock: Shock, targets: Iterable[str], frozen: frozenset[str]
) -> None:
    for vid in (shock.variable, *targets, *sorted(frozen)):
        if vid not in diagram:
            raise UnknownVariableError(f"unknown variable {vid!r} in diagram {diagram.name!r}")
    if shock.variable in frozen:
        raise ShockedVariableFrozenError(
            f"shocked variable {shock.variable!r} cannot be held constant"
        )


def _reaches_target(diagram: CausalDiagram, target: str, allowed: frozenset[str]) -> frozenset[str]:
    """Variables with a directed path to target inside the allowed set."""
    inbound: dict[str, list[str]] = {vid: [] for vid in diagram.variable_ids}
    for e in diagram.edges:
        inbound[e.target].append(e.source)
    reached = {target}
    frontier = [target]
    while frontier:
        node = frontier.pop()
        for prev in inbound[node]:
            if prev in allowed and prev not in reached:
                reached.add(prev)
                frontier.append(prev)
    return frozenset(reached)


def _simple_paths(
    diagram: CausalDiagram,
    source: str,
    target: str,
    frozen: frozenset[str],
    max_paths: int,
) -> list[tuple[CausalEdge, ...]]:
    """All simple directed paths source -> target avoiding frozen variables.

    A path "through" a frozen variable includes ending at one, so a frozen
    target yields no paths. The search is pruned to variables that can still
    reach the target, keeping the work proportional to the output.
    """
    allowed = frozenset(diagram.variable_ids) - frozen
    if target in frozen or source == target:
        return []
    useful = _reaches_target(diagram, target, allowed)
    if source not in useful:
        return []

    paths: list[tuple[CausalEdge, ...]] = []
    trail: list[CausalEdge] = []
    on_path = {source}

    def walk(node: str) -> None:
        for edge in diagram.successors[node]:
            nxt = edge.target
            if nxt == target:
                paths.append(tuple(trail) + (edge,))
                if len(paths) > max_paths:
                    raise PathBudgetExceededError(
                        f"more than {max_paths} simple paths from {source!r} to {target!r}"
                    )
            elif nxt in useful and nxt in allowed and nxt not in on_path:
                trail.append(edge)
                on_path.add(nxt)
                walk(nxt)
                on_path.discard(nxt)
                trail.pop()

    walk(source)
    paths.sort(key=lambda p: (len(p), tuple(e.source for e in p) + (p[-1].target,)))
    return paths


def propagate(
    diagram: CausalDiagram,
    shock: Shock,
    target: str,
    frozen: Iterable[str] = (),
    max_paths: int = DEFAULT_PATH_BUDGET,
) -> PropagationVerdict:
    """Qualitative response of ``target`` to ``shock``.

    Witness paths are reported in canonical order (shortest first, then by
    variable sequence) so a caller can render the red-arrow trace.
    """
    frozen_set = frozenset(frozen)
    _check_query(diagram, shock, [target], frozen_set)

    if target == shock.variable:
        identity = WitnessPath(edges=(), sign=Polarity.POSITIVE)
        return PropagationVerdict(
            target=target,
            outcome=Outcome(shock.direction.value),
            witness_paths=(identity,),
        )

    paths = _simple_paths(diagram, shock.variable, target, frozen_set, max_paths)
    witnesses = tuple(
        WitnessPath(edges=p, sign=sign_product(e.polarity for e in p)) for p in paths
    )
    signs = {w.sign for w in witnesses}
    if not witnesses:
        outcome = Outcome.NO_EFFECT
    elif len(signs) > 1:
        outcome = Outcome.INDETERMINATE
    else:
        direction = shock.direction
        if signs == {Polarity.NEGATIVE}:
            direction = direction.flipped()
        outcome = Outcome(direction.value)
    return PropagationVerdict(target=target, outcome=outcome, witness_paths=witnesses)


def propagate_all(
    diagram: CausalDiagram,
    shock: Shock,
    frozen: Iterable[str] = (),
    max_paths: int = DEFAULT_PATH_BUDGET,
) -> Mapping[str, PropagationVerdict]:
    """Verdict for every variable in the diagram, keyed by id (sorted)."""
    frozen_set = frozenset(frozen)
    _check_query(diagram, shock, [], frozen_set)
    return {
        vid: propagate(diagram, shock, vid, frozen_set, max_paths)
        for vid in sorted(diagram.variable_ids)
    }


def answer_mcq(
    diagram: CausalDiagram,
    shock: Shock,
    target: str,
    frozen: Iterable[str] = (),
) -> Outcome:
    """The multiple-choice answer: just the outcome, no witnesses."""
    return propagate(diagram, shock, target, frozen).outcome
