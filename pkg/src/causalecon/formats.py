"""Text formats: the diagram DSL, skeleton files, answer sheets, DOT, JSON.

The line-oriented DSL is meant to be typed by hand in a classroom:

    diagram price_revenue
    var price "Price"
    var sales "Sales" group=demand
    price -> sales : -          # a negative causal arrow

Skeleton files use ``skeleton <name>`` with ``a -- b`` link lines. Answer
sheets use ``sheet <skeleton>`` plus a ``student "..."`` line; answers are
``a -> b : +`` (orientation read off the arrow), ``a -- b : ?`` for blanks,
and an optional ``loop: reinforcing|balancing`` claim.

Parsing never stops at the first problem: every diagnostic in the file is
reported, each with a 1-based source span. Serialization is canonical
(sorted variables, then sorted edges/links) so parse/serialize round-trips
are byte-stable.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from typing import Generic, Mapping, Sequence, TypeVar

from .core import (
    CausalDiagram,
    CausalEconError,
    CausalEdge,
    CausalSkeleton,
    LoopPolarity,
    Polarity,
    Variable,
    build_diagram,
    build_skeleton,
    enumerate_loops,
    skeleton_of,
)
from .multiplier import IterationTrace, TraceKind, g_multiplier, t_multiplier
from .propagation import Outcome, PropagationVerdict, WitnessPath

T = TypeVar("T")

DIAGRAM_EXTENSION = ".cdg"
SKELETON_EXTENSION = ".skel"
ANSWER_SHEET_EXTENSION = ".ans"

_BARE_TOKEN = re.compile(r"[A-Za-z0-9_.]+")


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class SourceSpan:
    line: int  # 1-based
    column: int  # 1-based
    length: int


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: Severity
    message: str
    span: SourceSpan
    code: str = "syntax-error"

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.column}: {self.severity.value}: {self.message}"


class ParseFailedError(CausalEconError):
    code = "parse-error"

    def __init__(self, diagnostics: Sequence[ParseDiagnostic]):
        self.diagnostics = tuple(diagnostics)
        first = next((d for d in self.diagnostics if d.severity is Severity.ERROR), None)
        super().__init__(str(first) if first else "parse failed")


@dataclass(frozen=True)
class ParseResult(Generic[T]):
    """Parsed value plus every diagnostic; ``value`` is None iff errors exist."""

    value: T | None
    diagnostics: tuple[ParseDiagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.value is not None

    @property
    def errors(self) -> tuple[ParseDiagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[ParseDiagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity is Severity.WARNING)

    def value_or_raise(self) -> T:
        if self.value is None:
            raise ParseFailedError(self.diagnostics)
        return self.value


class Orientation(enum.Enum):
    FORWARD = "forward"  # from the smaller id of the pair to the larger
    BACKWARD = "backward"


@dataclass(frozen=True)
class LinkAnswer:
    pair: tuple[str, str]  # endpoint ids, sorted
    orientation: Orientation | None  # None = left blank
    polarity: Polarity | None  # None = left blank


@dataclass(frozen=True)
class AnswerSheet:
    student: str
    skeleton: str
    answers: tuple[LinkAnswer, ...]
    loop_claim: LoopPolarity | None = None

    def answer_for(self, pair: tuple[str, str]) -> LinkAnswer | None:
        for ans in self.answers:
            if ans.pair == pair:
                return ans
        return None


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # "word" | "string" | "op"
    text: str  # decoded text for strings
    line: int
    column: int
    length: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.line, self.column, self.length)


class _Collector:
    """Accumulates diagnostics during a parse."""

    def __init__(self) -> None:
        self.diagnostics: list[ParseDiagnostic] = []

    def error(self, message: str, span: SourceSpan, code: str = "syntax-error") -> None:
        self.diagnostics.append(ParseDiagnostic(Severity.ERROR, message, span, code))

    def warning(self, message: str, span: SourceSpan, code: str) -> None:
        self.diagnostics.append(ParseDiagnostic(Severity.WARNING, message, span, code))

    @property
    def failed(self) -> bool:
        return any(d.severity is Severity.ERROR for d in self.diagnostics)


def _decode_escapes(raw: str, line: int, start_col: int, out: _Collector) -> str:
    chars: list[str] = []
    i = 0
    while i < len(raw):
        c = raw[i]
        if c == "\\":
            if i + 1 >= len(raw):
                out.error("dangling escape at end of string", SourceSpan(line, start_col + i, 1))
                break
            nxt = raw[i + 1]
            mapped = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}.get(nxt)
            if mapped is None:
                out.error(f"unknown escape \\{nxt}", SourceSpan(line, start_col + i, 2))
                mapped = nxt
            chars.append(mapped)
            i += 2
        else:
            chars.append(c)
            i += 1
    return "".join(chars)


def _tokenize_line(text: str, lineno: int, out: _Collector) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c in " \t":
            i += 1
            continue
        if c == "#":
            break
        if c == '"':
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == '"':
                    break
                j += 1
            if j >= n:
                out.error("unterminated string", SourceSpan(lineno, i + 1, max(n - i, 1)))
                raw = text[i + 1 : n]
                decoded = _decode_escapes(raw, lineno, i + 2, out)
                tokens.append(_Token("string", decoded, lineno, i + 1, n - i))
                break
            raw = text[i + 1 : j]
            decoded = _decode_escapes(raw, lineno, i + 2, out)
            tokens.append(_Token("string", decoded, lineno, i + 1, j - i + 1))
            i = j + 1
            continue
        two = text[i : i + 2]
        if two in ("->", "--"):
            tokens.append(_Token("op", two, lineno, i + 1, 2))
            i += 2
            continue
        if c in ":=+-?":
            tokens.append(_Token("op", c, lineno, i + 1, 1))
            i += 1
            continue
        m = _BARE_TOKEN.match(text, i)
        if m:
            tokens.append(_Token("word", m.group(), lineno, i + 1, len(m.group())))
            i = m.end()
            continue
        out.error(f"unexpected character {c!r}", SourceSpan(lineno, i + 1, 1))
        i += 1
    return tokens


def _lines_of(text: str) -> list[str]:
    # LF or CRLF accepted; columns are counted on the line without the CR.
    return [line[:-1] if line.endswith("\r") else line for line in text.split("\n")]


def _line_span(lineno: int, line: str) -> SourceSpan:
    return SourceSpan(lineno, 1, max(len(line), 1))


# ---------------------------------------------------------------------------
# Diagram DSL
# ---------------------------------------------------------------------------


def _parse_header(
    keyword: str, tokens: list[_Token], lineno: int, line: str, out: _Collector
) -> str | None:
    if (
        len(tokens) == 2
        and tokens[0].kind == "word"
        and tokens[0].text == keyword
        and tokens[1].kind in ("word", "string")
    ):
        return tokens[1].text
    out.error(f"expected '{keyword} <name>' header", _line_span(lineno, line))
    return None


def _parse_var_line(tokens: list[_Token], out: _Collector) -> tuple[Variable, _Token] | None:
    if len(tokens) < 3 or tokens[1].kind != "word" or tokens[2].kind != "string":
        out.error(
            'expected: var <id> "<label>" [symbol=<sym>] [group=<tag>]',
            tokens[0].span,
        )
        return None
    id_token, label_token = tokens[1], tokens[2]
    attrs: dict[str, str] = {}
    rest = tokens[3:]
    i = 0
    while i < len(rest):
        key_token = rest[i]
        if key_token.kind != "word" or key_token.text not in ("symbol", "group"):
            out.error("expected symbol=<sym> or group=<tag>", key_token.span)
            return None
        value_ok = (
            i + 2 < len(rest)
            and rest[i + 1].kind == "op"
            and rest[i + 1].text == "="
            and rest[i + 2].kind in ("word", "string")
        )
        if not value_ok:
            out.error(f"expected {key_token.text}=<value>", key_token.span)
            return None
        if key_token.text in attrs:
            out.error(f"duplicate attribute {key_token.text!r}", key_token.span)
            return None
        attrs[key_token.text] = rest[i + 2].text
        i += 3
    var = Variable(
        id=id_token.text,
        label=label_token.text,
        symbol=attrs.get("symbol"),
        group=attrs.get("group"),
    )
    return var, id_token


def _parse_edge_line(tokens: list[_Token], out: _Collector) -> tuple[str, str, Polarity, _Token, _Token] | None:
    shape_ok = (
        len(tokens) == 5
        and tokens[0].kind == "word"
        and tokens[1].kind == "op"
        and tokens[1].text == "->"
        and tokens[2].kind == "word"
        and tokens[3].kind == "op"
        and tokens[3].text == ":"
        and tokens[4].kind == "op"
        and tokens[4].text in ("+", "-")
    )
    if not shape_ok:
        out.error("expected: <from> -> <to> : +|-", tokens[0].span)
        return None
    polarity = Polarity.from_token(tokens[4].text)
    return tokens[0].text, tokens[2].text, polarity, tokens[0], tokens[2]


def parse_diagram(text: str) -> ParseResult[CausalDiagram]:
    """Parse diagram DSL source, reporting every diagnostic in one pass."""
    out = _Collector()
    lines = _lines_of(text)
    name: str | None = None
    header_seen = False
    variables: list[Variable] = []
    var_spans: list[_Token] = []
    edges: list[tuple[str, str, Polarity, _Token, _Token]] = []

    for lineno, line in enumerate(lines, start=1):
        tokens = _tokenize_line(line, lineno, out)
        if not tokens:
            continue
        if not header_seen:
            header_seen = True
            name = _parse_header("diagram", tokens, lineno, line, out)
            continue
        first = tokens[0]
        if len(tokens) > 1 and tokens[1].kind == "op" and tokens[1].text == "->":
            parsed_edge = _parse_edge_line(tokens, out)
            if parsed_edge:
                edges.append(parsed_edge)
        elif first.kind == "word" and first.text == "var":
            parsed_var = _parse_var_line(tokens, out)
            if parsed_var:
                variables.append(parsed_var[0])
                var_spans.append(parsed_var[1])
        else:
            out.error("unrecognized line; expected a var declaration or an edge", first.span)

    if not header_seen:
        out.error("missing 'diagram <name>' header", SourceSpan(1, 1, 1))

    _check_variables(variables, var_spans, out)
    known_ids = {v.id for v in variables}
    seen_pairs: set[tuple[str, str]] = set()
    for source, target, _, src_tok, dst_tok in edges:
        for vid, token in ((source, src_tok), (target, dst_tok)):
            if vid not in known_ids:
                out.error(f"unknown variable {vid!r}", token.span, code="unknown-variable")
        if source == target:
            out.error(f"self-loop on {source!r}", dst_tok.span, code="self-loop")
        if (source, target) in seen_pairs:
            out.error(f"duplicate edge {source}->{target}", src_tok.span, code="duplicate-edge")
        seen_pairs.add((source, target))

    if out.failed or name is None:
        return ParseResult(None, tuple(out.diagnostics))
    diagram = build_diagram(
        name, variables, [CausalEdge(s, t, p) for s, t, p, _, _ in edges]
    )
    return ParseResult(diagram, tuple(out.diagnostics))


def _check_variables(variables: list[Variable], tokens: list[_Token], out: _Collector) -> None:
    seen_ids: set[str] = set()
    seen_symbols: set[str] = set()
    for var, token in zip(variables, tokens):
        if var.id in seen_ids:
            out.error(f"duplicate variable id {var.id!r}", token.span, code="duplicate-variable-id")
        seen_ids.add(var.id)
        if var.symbol is not None:
            if var.symbol in seen_symbols:
                out.error(
                    f"symbol {var.symbol!r} assigned to more than one variable",
                    token.span,
                    code="duplicate-symbol",
                )
            seen_symbols.add(var.symbol)


def _quote(value: str) -> str:
    escaped = (
        value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    )
    return f'"{escaped}"'


def _bare_or_quoted(value: str) -> str:
    return value if _BARE_TOKEN.fullmatch(value) else _quote(value)


def _var_line(v: Variable) -> str:
    parts = [f"var {v.id} {_quote(v.label)}"]
    if v.symbol is not None:
        parts.append(f"symbol={_bare_or_quoted(v.symbol)}")
    if v.group is not None:
        parts.append(f"group={_bare_or_quoted(v.group)}")
    return " ".join(parts)


def serialize_diagram(diagram: CausalDiagram) -> str:
    """Canonical DSL text: sorted variables, then edges sorted by (from, to)."""
    lines = [f"diagram {_bare_or_quoted(diagram.name)}"]
    lines.extend(_var_line(v) for v in sorted(diagram.variables, key=lambda v: v.id))
    lines.extend(
        f"{e.source} -> {e.target} : {e.polarity.token}"
        for e in sorted(diagram.edges, key=lambda e: (e.source, e.target))
    )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Skeleton files
# ---------------------------------------------------------------------------


def parse_skeleton(text: str) -> ParseResult[CausalSkeleton]:
    out = _Collector()
    lines = _lines_of(text)
    name: str | None = None
    header_seen = False
    variables: list[Variable] = []
    var_spans: list[_Token] = []
    links: list[tuple[str, str, _Token, _Token]] = []

    for lineno, line in enumerate(lines, start=1):
        tokens = _tokenize_line(line, lineno, out)
        if not tokens:
            continue
        if not header_seen:
            header_seen = True
            name = _parse_header("skeleton", tokens, lineno, line, out)
            continue
        first = tokens[0]
        if len(tokens) > 1 and tokens[1].kind == "op" and tokens[1].text == "--":
            if len(tokens) == 3 and tokens[0].kind == "word" and tokens[2].kind == "word":
                links.append((tokens[0].text, tokens[2].text, tokens[0], tokens[2]))
            else:
                out.error("expected: <id> -- <id>", first.span)
        elif first.kind == "word" and first.text == "var":
            parsed_var = _parse_var_line(tokens, out)
            if parsed_var:
                variables.append(parsed_var[0])
                var_spans.append(parsed_var[1])
        else:
            out.error("unrecognized line; expected a var declaration or a link", first.span)

    if not header_seen:
        out.error("missing 'skeleton <name>' header", SourceSpan(1, 1, 1))

    _check_variables(variables, var_spans, out)
    known_ids = {v.id for v in variables}
    seen: set[tuple[str, str]] = set()
    normalized: list[tuple[str, str]] = []
    for a, b, tok_a, tok_b in links:
        for vid, token in ((a, tok_a), (b, tok_b)):
            if vid not in known_ids:
                out.error(f"unknown variable {vid!r}", token.span, code="unknown-variable")
        if a == b:
            out.error(f"self-link on {a!r}", tok_b.span, code="self-loop")
            continue
        pair = (a, b) if a <= b else (b, a)
        if pair in seen:
            out.error(f"duplicate link {a}--{b}", tok_a.span, code="duplicate-edge")
        seen.add(pair)
        normalized.append(pair)

    if out.failed or name is None:
        return ParseResult(None, tuple(out.diagnostics))
    skeleton = build_skeleton(name, variables, normalized)
    return ParseResult(skeleton, tuple(out.diagnostics))


def serialize_skeleton(skeleton: CausalSkeleton) -> str:
    lines = [f"skeleton {_bare_or_quoted(skeleton.name)}"]
    lines.extend(_var_line(v) for v in sorted(skeleton.variables, key=lambda v: v.id))
    lines.extend(f"{a} -- {b}" for a, b in sorted(skeleton.links))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Answer sheets
# ---------------------------------------------------------------------------


def parse_answer_sheet(text: str, skeleton: CausalSkeleton) -> ParseResult[AnswerSheet]:
    """Parse a student sheet and validate it against ``skeleton``.

    Orientation is read off the arrow as written; the stored claim is
    relative to the link's sorted id pair. Links with no answer line are
    left out of the sheet (graded as blank) with a summary warning.
    """
    out = _Collector()
    lines = _lines_of(text)
    header_seen = False
    header_span = SourceSpan(1, 1, 1)
    declared: str | None = None
    student: str | None = None
    student_span: _Token | None = None
    answers: dict[tuple[str, str], LinkAnswer] = {}
    loop_claim: LoopPolarity | None = None
    loop_seen = False

    for lineno, line in enumerate(lines, start=1):
        tokens = _tokenize_line(line, lineno, out)
        if not tokens:
            continue
        if not header_seen:
            header_seen = True
            header_span = _line_span(lineno, line)
            declared = _parse_header("sheet", tokens, lineno, line, out)
            continue
        first = tokens[0]
        if first.kind == "word" and first.text == "student" and len(tokens) >= 2:
            if len(tokens) == 2 and tokens[1].kind in ("word", "string"):
                if student is not None:
                    out.error("duplicate student line", first.span)
                student = tokens[1].text
                student_span = tokens[1]
            else:
                out.error('expected: student "<name>"', first.span)
            continue
        if (
            first.kind == "word"
            and first.text == "loop"
            and len(tokens) >= 2
            and tokens[1].kind == "op"
            and tokens[1].text == ":"
        ):
            if len(tokens) == 3 and tokens[2].kind == "word" and tokens[2].text in (
                "reinforcing",
                "balancing",
            ):
                if loop_seen:
                    out.error("duplicate loop claim", first.span, code="duplicate-answer")
                loop_seen = True
                loop_claim = LoopPolarity(tokens[2].text)
            else:
                out.error("expected: loop: reinforcing|balancing", first.span)
            continue
        _parse_answer_line(tokens, skeleton, answers, out)

    if not header_seen:
        out.error("missing 'sheet <skeleton>' header", SourceSpan(1, 1, 1))
    elif declared is not None and declared != skeleton.name:
        out.error(
            f"sheet is for skeleton {declared!r}, expected {skeleton.name!r}",
            header_span,
            code="skeleton-name-mismatch",
        )
    if header_seen and student is None:
        out.error('missing student line (student "<name>")', header_span, code="missing-student")

    missing = [pair for pair in skeleton.links if pair not in answers]
    if missing and not out.failed:
        listed = ", ".join(f"{a}--{b}" for a, b in missing[:5])
        suffix = ", ..." if len(missing) > 5 else ""
        out.warning(
            f"{len(missing)} link(s) left unanswered (graded as blank): {listed}{suffix}",
            header_span,
            code="missing-answer",
        )

    if out.failed or declared is None or student is None:
        return ParseResult(None, tuple(out.diagnostics))
    sheet = AnswerSheet(
        student=student,
        skeleton=declared,
        answers=tuple(answers[pair] for pair in sorted(answers)),
        loop_claim=loop_claim,
    )
    return ParseResult(sheet, tuple(out.diagnostics))


def _parse_answer_line(
    tokens: list[_Token],
    skeleton: CausalSkeleton,
    answers: dict[tuple[str, str], LinkAnswer],
    out: _Collector,
) -> None:
    shape_ok = (
        len(tokens) == 5
        and tokens[0].kind == "word"
        and tokens[1].kind == "op"
        and tokens[1].text in ("->", "--")
        and tokens[2].kind == "word"
        and tokens[3].kind == "op"
        and tokens[3].text == ":"
        and tokens[4].kind == "op"
        and tokens[4].text in ("+", "-", "?")
    )
    if not shape_ok:
        out.error("expected: <id> -> <id> : +|-  or  <id> -- <id> : ?", tokens[0].span)
        return
    a, b = tokens[0].text, tokens[2].text
    for vid, token in ((a, tokens[0]), (b, tokens[2])):
        if vid not in skeleton.variable_ids:
            out.error(f"unknown variable {vid!r}", token.span, code="unknown-variable")
            return
    pair = (a, b) if a <= b else (b, a)
    if pair not in skeleton.link_set:
        out.error(
            f"{a}--{b} is not a link of skeleton {skeleton.name!r}",
            tokens[0].span,
            code="link-not-in-skeleton",
        )
        return
    if pair in answers:
        out.error(f"duplicate answer for {a}--{b}", tokens[0].span, code="duplicate-answer")
        return
    if tokens[1].text == "->":
        orientation = Orientation.FORWARD if (a, b) == pair else Orientation.BACKWARD
    else:
        orientation = None
    polarity = Polarity.from_token(tokens[4].text) if tokens[4].text in "+-" else None
    answers[pair] = LinkAnswer(pair=pair, orientation=orientation, polarity=polarity)


def serialize_answer_sheet(sheet: AnswerSheet) -> str:
    lines = [f"sheet {_bare_or_quoted(sheet.skeleton)}", f"student {_quote(sheet.student)}"]
    for ans in sorted(sheet.answers, key=lambda a: a.pair):
        a, b = ans.pair
        if ans.orientation is Orientation.BACKWARD:
            a, b = b, a
        connector = "--" if ans.orientation is None else "->"
        sign = ans.polarity.token if ans.polarity is not None else "?"
        lines.append(f"{a} {connector} {b} : {sign}")
    if sheet.loop_claim is not None:
        lines.append(f"loop: {sheet.loop_claim.value}")
    return "\n".join(lines) + "\n"


def perfect_sheet(diagram: CausalDiagram, student: str = "answer key") -> AnswerSheet:
    """The fully correct sheet for a diagram: its own answer key."""
    skeleton = skeleton_of(diagram)
    by_pair: dict[tuple[str, str], CausalEdge] = {}
    for e in diagram.edges:
        by_pair.setdefault(e.pair, e)
    answers = []
    for pair in skeleton.links:
        e = by_pair[pair]
        orientation = Orientation.FORWARD if (e.source, e.target) == pair else Orientation.BACKWARD
        answers.append(LinkAnswer(pair=pair, orientation=orientation, polarity=e.polarity))
    loops = enumerate_loops(diagram)
    claim = loops[0].polarity if len(loops) == 1 else None
    return AnswerSheet(
        student=student, skeleton=skeleton.name, answers=tuple(answers), loop_claim=claim
    )


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------


def _dot_quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


_OUTCOME_MARKS = {
    Outcome.INCREASE: "\u2191",
    Outcome.DECREASE: "\u2193",
    Outcome.INDETERMINATE: "?",
}


def export_dot(
    diagram: CausalDiagram,
    overlay: Mapping[str, PropagationVerdict] | None = None,
) -> str:
    """Deterministic DOT text; overlay verdicts mark nodes with arrows and
    paint witness-path edges red, in the style of the lecture slides."""
    lines = [f"digraph {_dot_quote(diagram.name)} {{"]
    witness_edges: set[tuple[str, str]] = set()
    if overlay:
        for verdict in overlay.values():
            for path in verdict.witness_paths:
                witness_edges.update((e.source, e.target) for e in path.edges)
    for v in sorted(diagram.variables, key=lambda v: v.id):
        label = v.label
        if overlay and v.id in overlay:
            mark = _OUTCOME_MARKS.get(overlay[v.id].outcome)
            if mark:
                label = f"{label} {mark}"
        lines.append(f"  {_dot_quote(v.id)} [label={_dot_quote(label)}];")
    for e in sorted(diagram.edges, key=lambda e: (e.source, e.target)):
        attrs = [f"label={_dot_quote(e.polarity.token)}"]
        if (e.source, e.target) in witness_edges:
            attrs.append("color=red")
        lines.append(f"  {_dot_quote(e.source)} -> {_dot_quote(e.target)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Structured-data (JSON) documents
# ---------------------------------------------------------------------------


class DocumentError(CausalEconError):
    """A structured-data document does not match the expected shape."""

    code = "invalid-document"


def diagram_to_dict(diagram: CausalDiagram) -> dict:
    return {
        "name": diagram.name,
        "variables": [
            {"id": v.id, "label": v.label, "symbol": v.symbol, "group": v.group}
            for v in diagram.variables
        ],
        "edges": [
            {"from": e.source, "to": e.target, "polarity": e.polarity.name.lower()}
            for e in diagram.edges
        ],
    }


def _require(doc: Mapping, key: str, kind: type, where: str):
    if key not in doc:
        raise DocumentError(f"{where}: missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise DocumentError(f"{where}: field {key!r} must be {kind.__name__}")
    return value


def _polarity_from_name(name, where: str) -> Polarity:
    if name == "positive":
        return Polarity.POSITIVE
    if name == "negative":
        return Polarity.NEGATIVE
    raise DocumentError(f"{where}: polarity must be 'positive' or 'negative', got {name!r}")


def _variables_from(doc: Mapping, where: str) -> list[Variable]:
    variables = []
    for i, item in enumerate(_require(doc, "variables", list, where)):
        if not isinstance(item, Mapping):
            raise DocumentError(f"{where}: variables[{i}] must be an object")
        symbol = item.get("symbol")
        group = item.get("group")
        variables.append(
            Variable(
                id=_require(item, "id", str, f"{where}: variables[{i}]"),
                label=_require(item, "label", str, f"{where}: variables[{i}]"),
                symbol=symbol if isinstance(symbol, str) else None,
                group=group if isinstance(group, str) else None,
            )
        )
    return variables


def diagram_from_dict(doc: Mapping) -> CausalDiagram:
    where = "diagram document"
    name = _require(doc, "name", str, where)
    variables = _variables_from(doc, where)
    edges = []
    for i, item in enumerate(_require(doc, "edges", list, where)):
        if not isinstance(item, Mapping):
            raise DocumentError(f"{where}: edges[{i}] must be an object")
        edges.append(
            CausalEdge(
                source=_require(item, "from", str, f"{where}: edges[{i}]"),
                target=_require(item, "to", str, f"{where}: edges[{i}]"),
                polarity=_polarity_from_name(item.get("polarity"), f"{where}: edges[{i}]"),
            )
        )
    return build_diagram(name, variables, edges)


def skeleton_to_dict(skeleton: CausalSkeleton) -> dict:
    return {
        "name": skeleton.name,
        "variables": [
            {"id": v.id, "label": v.label, "symbol": v.symbol, "group": v.group}
            for v in skeleton.variables
        ],
        "links": [[a, b] for a, b in skeleton.links],
    }


def skeleton_from_dict(doc: Mapping) -> CausalSkeleton:
    where = "skeleton document"
    name = _require(doc, "name", str, where)
    variables = _variables_from(doc, where)
    links = []
    for i, item in enumerate(_require(doc, "links", list, where)):
        if not (isinstance(item, Sequence) and len(item) == 2):
            raise DocumentError(f"{where}: links[{i}] must be a pair of ids")
        links.append((str(item[0]), str(item[1])))
    return build_skeleton(name, variables, links)


def sheet_to_dict(sheet: AnswerSheet) -> dict:
    return {
        "student": sheet.student,
        "skeleton": sheet.skeleton,
        "answers": [
            {
                "pair": list(a.pair),
                "orientation": a.orientation.value if a.orientation else None,
                "polarity": a.polarity.name.lower() if a.polarity else None,
            }
            for a in sheet.answers
        ],
        "loop_claim": sheet.loop_claim.value if sheet.loop_claim else None,
    }


def sheet_from_dict(doc: Mapping) -> AnswerSheet:
    where = "answer sheet document"
    answers = []
    for i, item in enumerate(_require(doc, "answers", list, where)):
        if not isinstance(item, Mapping):
            raise DocumentError(f"{where}: answers[{i}] must be an object")
        pair = item.get("pair")
        if not (isinstance(pair, Sequence) and len(pair) == 2):
            raise DocumentError(f"{where}: answers[{i}].pair must be a pair of ids")
        a, b = str(pair[0]), str(pair[1])
        if a == b:
            raise DocumentError(f"{where}: answers[{i}].pair is a self-link")
        orientation_name = item.get("orientation")
        if orientation_name is None:
            orientation = None
        elif orientation_name in ("forward", "backward"):
            orientation = Orientation(orientation_name)
        else:
            raise DocumentError(
                f"{where}: answers[{i}].orientation must be forward/backward/null"
            )
        # Claims arrive relative to the written pair; normalize to sorted order.
        if a > b:
            a, b = b, a
            if orientation is not None:
                orientation = (
                    Orientation.BACKWARD
                    if orientation is Orientation.FORWARD
                    else Orientation.FORWARD
                )
        polarity_name = item.get("polarity")
        polarity = (
            None
            if polarity_name is None
            else _polarity_from_name(polarity_name, f"{where}: answers[{i}]")
        )
        answers.append(LinkAnswer(pair=(a, b), orientation=orientation, polarity=polarity))
    pairs = [a.pair for a in answers]
    if len(set(pairs)) != len(pairs):
        raise DocumentError(f"{where}: duplicate answers for one link")
    loop_name = doc.get("loop_claim")
    if loop_name is None:
        loop_claim = None
    elif loop_name in ("reinforcing", "balancing"):
        loop_claim = LoopPolarity(loop_name)
    else:
        raise DocumentError(f"{where}: loop_claim must be reinforcing/balancing/null")
    return AnswerSheet(
        student=_require(doc, "student", str, where),
        skeleton=_require(doc, "skeleton", str, where),
        answers=tuple(sorted(answers, key=lambda a: a.pair)),
        loop_claim=loop_claim,
    )


def witness_path_to_dict(path: WitnessPath) -> dict:
    return {
        "sign": path.sign.name.lower(),
        "variables": list(path.variables),
        "edges": [
            {"from": e.source, "to": e.target, "polarity": e.polarity.name.lower()}
            for e in path.edges
        ],
    }


def verdict_to_dict(verdict: PropagationVerdict) -> dict:
    return {
        "target": verdict.target,
        "outcome": verdict.outcome.value,
        "witness_paths": [witness_path_to_dict(p) for p in verdict.witness_paths],
    }


def trace_to_dict(trace: IterationTrace) -> dict:
    if trace.kind is TraceKind.GOVERNMENT_PURCHASES:
        factor = g_multiplier(trace.mpc)
    else:
        factor = t_multiplier(trace.mpc)
    return {
        "kind": trace.kind.value,
        "mpc": trace.mpc,
        "delta": trace.delta,
        "rows": [
            {
                "round": r.round,
                "label": r.label,
                "amount": r.amount,
                "contribution": r.contribution,
                "cumulative": r.cumulative,
            }
            for r in trace.rows
        ],
        "closed_form_total": trace.closed_form_total,
        "multiplier": factor,
    }


def diagram_to_json(diagram: CausalDiagram) -> str:
    return json.dumps(diagram_to_dict(diagram), indent=2) + "\n"


def diagram_from_json(text: str) -> CausalDiagram:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise DocumentError("diagram document must be a JSON object")
    return diagram_from_dict(doc)
