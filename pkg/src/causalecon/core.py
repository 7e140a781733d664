"""Signed causal diagrams, causal skeletons, and feedback loops.

A causal diagram is a directed graph whose arrows carry a polarity: positive
arrows mean cause and effect move in the same direction, negative arrows mean
they move inversely. A causal skeleton is the same graph with directions and
signs erased. Feedback loops are simple directed cycles, classified as
reinforcing (even number of negative arrows) or balancing (odd number).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

#: Variable ids are ASCII tokens so they stay stable across text formats.
ID_PATTERN = re.compile(r"[A-Za-z0-9_.]+")


class CausalEconError(Exception):
    """Base class for all toolkit errors. ``code`` is a stable machine tag."""

    code = "error"


class NotACycleError(CausalEconError):
    code = "not-a-cycle"


class DiagramValidationError(CausalEconError):
    """Raised when diagram construction violates a structural invariant.

    Carries every violation found, not just the first.
    """

    code = "invalid-diagram"

    def __init__(self, issues: Sequence["ValidationIssue"]):
        self.issues = tuple(issues)
        super().__init__("; ".join(i.message for i in self.issues))


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    subject: str  # offending variable id or "from->to" edge tag


class Polarity(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    def __mul__(self, other: "Polarity") -> "Polarity":
        if self is other:
            return Polarity.POSITIVE
        return Polarity.NEGATIVE

    @property
    def token(self) -> str:
        return self.value

    @classmethod
    def from_token(cls, token: str) -> "Polarity":
        if token == "+":
            return cls.POSITIVE
        if token == "-":
            return cls.NEGATIVE
        raise ValueError(f"not a polarity token: {token!r}")


class LoopPolarity(enum.Enum):
    REINFORCING = "reinforcing"
    BALANCING = "balancing"


@dataclass(frozen=True)
class Variable:
    id: str
    label: str
    symbol: str | None = None
    group: str | None = None


@dataclass(frozen=True)
class CausalEdge:
    source: str
    target: str
    polarity: Polarity

    @property
    def pair(self) -> tuple[str, str]:
        """The unordered endpoint pair, in sorted order."""
        return (self.source, self.target) if self.source <= self.target else (self.target, self.source)


def sign_product(polarities: Iterable[Polarity]) -> Polarity:
    """Product of edge signs: positive iff the negative count is even."""
    negatives = sum(1 for p in polarities if p is Polarity.NEGATIVE)
    return Polarity.NEGATIVE if negatives % 2 else Polarity.POSITIVE


@dataclass(frozen=True)
class CausalDiagram:
    """A validated, immutable signed directed graph.

    Construct through :func:`build_diagram`; variables are stored sorted by id
    and edges sorted by (source, target), so equal diagrams compare equal
    regardless of input order.
    """

    name: str
    variables: tuple[Variable, ...]
    edges: tuple[CausalEdge, ...]

    @cached_property
    def variable_ids(self) -> frozenset[str]:
        return frozenset(v.id for v in self.variables)

    @cached_property
    def variables_by_id(self) -> dict[str, Variable]:
        return {v.id: v for v in self.variables}

    @cached_property
    def successors(self) -> dict[str, tuple[CausalEdge, ...]]:
        out: dict[str, list[CausalEdge]] = {v.id: [] for v in self.variables}
        for e in self.edges:
            out[e.source].append(e)
        return {vid: tuple(edges) for vid, edges in out.items()}

    @cached_property
    def edge_map(self) -> dict[tuple[str, str], CausalEdge]:
        return {(e.source, e.target): e for e in self.edges}

    def edge(self, source: str, target: str) -> CausalEdge:
        return self.edge_map[(source, target)]

    def __contains__(self, variable_id: str) -> bool:
        return variable_id in self.variable_ids


@dataclass(frozen=True)
class CausalSkeleton:
    """Variables plus undirected links: a diagram awaiting direction and sign."""

    name: str
    variables: tuple[Variable, ...]
    links: tuple[tuple[str, str], ...]  # sorted pairs, sorted

    @cached_property
    def link_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.links)

    @cached_property
    def variable_ids(self) -> frozenset[str]:
        return frozenset(v.id for v in self.variables)


@dataclass(frozen=True)
class FeedbackLoop:
    """A simple directed cycle with its classification.

    Edges chain head-to-tail and close; the cycle is stored in canonical
    rotation, starting from its lexicographically smallest variable id.
    """

    edges: tuple[CausalEdge, ...]
    polarity: LoopPolarity

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(e.source for e in self.edges)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class LoopSet(Sequence):
    """Result of loop enumeration; behaves as a sequence of FeedbackLoop.

    ``truncated`` is set when the search stopped at the loop cap, in which
    case ``loops`` holds only the loops found up to that point.
    """

    loops: tuple[FeedbackLoop, ...]
    truncated: bool = False

    def __iter__(self) -> Iterator[FeedbackLoop]:
        return iter(self.loops)

    def __len__(self) -> int:
        return len(self.loops)

    def __getitem__(self, index):
        return self.loops[index]


def validate_diagram_parts(
    variables: Sequence[Variable], edges: Sequence[CausalEdge]
) -> list[ValidationIssue]:
    """Check diagram invariants, returning every violation found.

    Shared by :func:`build_diagram` (which raises) and the text parser (which
    attaches source spans to the same issue codes).
    """
    issues: list[ValidationIssue] = []
    seen_ids: set[str] = set()
    seen_symbols: set[str] = set()
    for v in variables:
        if not ID_PATTERN.fullmatch(v.id):
            issues.append(
                ValidationIssue(
                    "invalid-variable-id",
                    f"variable id {v.id!r} is not a bare token ([A-Za-z0-9_.]+)",
                    v.id,
                )
            )
        if v.id in seen_ids:
            issues.append(
                ValidationIssue("duplicate-variable-id", f"duplicate variable id {v.id!r}", v.id)
            )
        seen_ids.add(v.id)
        if v.symbol is not None:
            if v.symbol in seen_symbols:
                issues.append(
                    ValidationIssue(
                        "duplicate-symbol",
                        f"symbol {v.symbol!r} assigned to more than one variable",
                        v.id,
                    )
                )
            seen_symbols.add(v.symbol)

    seen_pairs: set[tuple[str, str]] = set()
    for e in edges:
        tag = f"{e.source}->{e.target}"
        for endpoint in (e.source, e.target):
            if endpoint not in seen_ids:
                issues.append(
                    ValidationIssue(
                        "dangling-edge-endpoint",
                        f"edge {tag} references unknown variable {endpoint!r}",
                        tag,
                    )
                )
        if e.source == e.target:
            issues.append(ValidationIssue("self-loop", f"self-loop on {e.source!r}", tag))
        if (e.source, e.target) in seen_pairs:
            issues.append(ValidationIssue("duplicate-edge", f"duplicate edge {tag}", tag))
        seen_pairs.add((e.source, e.target))
    return issues


def build_diagram(
    name: str, variables: Iterable[Variable], edges: Iterable[CausalEdge]
) -> CausalDiagram:
    """Validate and construct a diagram, raising on any invariant violation."""
    vars_list = list(variables)
    edges_list = list(edges)
    issues = validate_diagram_parts(vars_list, edges_list)
    if issues:
        raise DiagramValidationError(issues)
    return CausalDiagram(
        name=name,
        variables=tuple(sorted(vars_list, key=lambda v: v.id)),
        edges=tuple(sorted(edges_list, key=lambda e: (e.source, e.target))),
    )


def build_skeleton(
    name: str, variables: Iterable[Variable], links: Iterable[tuple[str, str]]
) -> CausalSkeleton:
    """Validate and construct a skeleton (no self-links, unique sorted pairs)."""
    vars_list = list(variables)
    issues = validate_diagram_parts(vars_list, [])
    ids = {v.id for v in vars_list}
    normalized: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for a, b in links:
        tag = f"{a}--{b}"
        if a == b:
            issues.append(ValidationIssue("self-loop", f"self-link on {a!r}", tag))
            continue
        pair = (a, b) if a <= b else (b, a)
        for endpoint in pair:
            if endpoint not in ids:
                issues.append(
                    ValidationIssue(
                        "dangling-edge-endpoint",
                        f"link {tag} references unknown variable {endpoint!r}",
                        tag,
                    )
                )
        if pair in seen:
            issues.append(ValidationIssue("duplicate-edge", f"duplicate link {tag}", tag))
            continue
        seen.add(pair)
        normalized.append(pair)
    if issues:
        raise DiagramValidationError(issues)
    return CausalSkeleton(
        name=name,
        variables=tuple(sorted(vars_list, key=lambda v: v.id)),
        links=tuple(sorted(normalized)),
    )


def skeleton_of(diagram: CausalDiagram) -> CausalSkeleton:
    """Erase directions and signs; antiparallel edges collapse to one link."""
    pairs = sorted({e.pair for e in diagram.edges})
    return CausalSkeleton(name=diagram.name, variables=diagram.variables, links=tuple(pairs))


def loop_polarity(cycle: Sequence[CausalEdge]) -> LoopPolarity:
    """Classify a simple directed cycle: reinforcing iff its sign product is +."""
    if not cycle:
        raise NotACycleError("empty edge list is not a cycle")
    for prev, nxt in zip(cycle, cycle[1:]):
        if prev.target != nxt.source:
            raise NotACycleError(f"edges do not chain: {prev.target!r} != {nxt.source!r}")
    if cycle[-1].target != cycle[0].source:
        raise NotACycleError("edge sequence does not close into a cycle")
    visited = [e.source for e in cycle]
    if len(set(visited)) != len(visited):
        raise NotACycleError("cycle revisits a variable")
    if sign_product(e.polarity for e in cycle) is Polarity.POSITIVE:
        return LoopPolarity.REINFORCING
    return LoopPolarity.BALANCING


def enumerate_loops(diagram: CausalDiagram, max_loops: int = 10_000) -> LoopSet:
    """Enumerate every simple directed cycle, each classified and canonically
    rotated to start at its lexicographically smallest variable id.

    Output order is deterministic: loops sorted by length, then by variable
    sequence. Enumeration stops after ``max_loops`` cycles and reports
    ``truncated=True`` instead of failing.
    """
    succ = {vid: sorted(e.target for e in edges) for vid, edges in diagram.successors.items()}
    found: list[tuple[str, ...]] = []
    truncated = False

    # Each cycle is discovered exactly once by rooting the search at its
    # smallest variable id and never descending to ids below the root.
    for root in sorted(succ):
        if truncated:
            break
        path = [root]
        on_path = {root}
        stack: list[Iterator[str]] = [iter(succ[root])]
        while stack:
            advanced = False
            for nxt in stack[-1]:
                if nxt == root:
                    found.append(tuple(path))
                    if len(found) >= max_loops:
                        truncated = True
                        stack.clear()
                        advanced = True
                        break
                elif nxt > root and nxt not in on_path:
                    path.append(nxt)
                    on_path.add(nxt)
                    stack.append(iter(succ[nxt]))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                on_path.discard(path.pop())

    loops = []
    for nodes in sorted(found, key=lambda ns: (len(ns), ns)):
        edges = tuple(
            diagram.edge(nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes))
        )
        loops.append(FeedbackLoop(edges=edges, polarity=loop_polarity(edges)))
    return LoopSet(loops=tuple(loops), truncated=truncated)
