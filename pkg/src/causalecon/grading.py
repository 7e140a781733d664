"""Scoring of causal-skeleton answer sheets and cohort statistics.

Direction and polarity are scored independently per link: a student who drew
every arrow backwards but signed every relationship correctly earns zero
direction points and full polarity points. Blank answers are incorrect for
both scores. Percentages are carried as exact rationals and rounded half-up
to two decimals only at display time, which is what reproduces the published
class tables digit for digit.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from typing import Sequence

from .core import CausalDiagram, CausalEconError, CausalEdge, enumerate_loops, skeleton_of
from .formats import AnswerSheet, Orientation

CSV_HEADER = "student,total,dir_correct,dir_pct,pol_correct,pol_pct,loop_correct"


class SkeletonMismatchError(CausalEconError):
    code = "skeleton-mismatch"


class EmptyInputError(CausalEconError):
    code = "empty-input"


class NoCommonStudentsError(CausalEconError):
    code = "no-common-students"


@dataclass(frozen=True)
class ScoreReport:
    student: str
    total_links: int
    direction_correct: int
    polarity_correct: int
    loop_claim_correct: bool | None = None

    @property
    def direction_pct(self) -> Fraction:
        return self._pct(self.direction_correct)

    @property
    def polarity_pct(self) -> Fraction:
        return self._pct(self.polarity_correct)

    def _pct(self, correct: int) -> Fraction:
        if self.total_links == 0:
            return Fraction(100)  # nothing to get wrong: vacuously perfect
        return Fraction(100 * correct, self.total_links)


@dataclass(frozen=True)
class ClassStats:
    """Cohort summary; sd is the sample (n-1) form, cv = sd/mean.

    sd is None for a single report; cv is None when sd is None or mean is 0.
    """

    n: int
    mean: Fraction
    median: Fraction
    sd: float | None
    cv: float | None


def round_half_up(value: Fraction | float | int, places: int = 2) -> Decimal:
    """Round with ties away from zero, e.g. 53.125 -> 53.13 at 2 places."""
    if isinstance(value, Fraction):
        with localcontext() as ctx:
            ctx.prec = 60
            dec = Decimal(value.numerator) / Decimal(value.denominator)
    elif isinstance(value, float):
        dec = Decimal(repr(value))
    else:
        dec = Decimal(value)
    return dec.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)


def format_pct(value: Fraction | float, places: int = 2) -> str:
    """Percentage cell exactly as the class tables print it: '53.13%'."""
    return f"{round_half_up(value, places)}%"


def format_stat(value: Fraction | float, places: int = 2) -> str:
    return str(round_half_up(value, places))


def grade(reference: CausalDiagram, sheet: AnswerSheet) -> ScoreReport:
    """Score one sheet against the reference diagram.

    Direction is correct when the claimed arrow matches a reference edge on
    that link; polarity is correct when the claimed sign matches a reference
    edge's sign on that link, regardless of the claimed direction. The loop
    claim is judged only when the sheet makes one and the reference has
    exactly one feedback loop.
    """
    skeleton = skeleton_of(reference)
    if sheet.skeleton != reference.name:
        raise SkeletonMismatchError(
            f"sheet answers skeleton {sheet.skeleton!r}, reference is {reference.name!r}"
        )
    stray = [a.pair for a in sheet.answers if a.pair not in skeleton.link_set]
    if stray:
        a, b = stray[0]
        raise SkeletonMismatchError(f"sheet answers {a}--{b}, not a link of the reference")

    edges_by_pair: dict[tuple[str, str], list[CausalEdge]] = {}
    for e in reference.edges:
        edges_by_pair.setdefault(e.pair, []).append(e)

    direction_correct = 0
    polarity_correct = 0
    for pair in skeleton.links:
        answer = sheet.answer_for(pair)
        if answer is None:
            continue
        ref_edges = edges_by_pair[pair]
        if answer.orientation is not None:
            claimed = pair if answer.orientation is Orientation.FORWARD else pair[::-1]
            if any((e.source, e.target) == claimed for e in ref_edges):
                direction_correct += 1
        if answer.polarity is not None:
            if any(e.polarity is answer.polarity for e in ref_edges):
                polarity_correct += 1

    loop_claim_correct: bool | None = None
    if sheet.loop_claim is not None:
        loops = enumerate_loops(reference)
        if len(loops) == 1 and not loops.truncated:
            loop_claim_correct = sheet.loop_claim is loops[0].polarity

    return ScoreReport(
        student=sheet.student,
        total_links=len(skeleton.links),
        direction_correct=direction_correct,
        polarity_correct=polarity_correct,
        loop_claim_correct=loop_claim_correct,
    )


@dataclass(frozen=True)
class LinkMark:
    """Per-link grading detail, for rendering a marked-up sheet."""

    pair: tuple[str, str]
    answered: bool
    direction_correct: bool
    polarity_correct: bool


def link_breakdown(reference: CausalDiagram, sheet: AnswerSheet) -> tuple[LinkMark, ...]:
    """Per-link marks under the same rules as :func:`grade`; the mark counts
    always sum to the grade's counts."""
    skeleton = skeleton_of(reference)
    edges_by_pair: dict[tuple[str, str], list[CausalEdge]] = {}
    for e in reference.edges:
        edges_by_pair.setdefault(e.pair, []).append(e)
    marks = []
    for pair in skeleton.links:
        answer = sheet.answer_for(pair)
        direction_ok = False
        polarity_ok = False
        if answer is not None:
            ref_edges = edges_by_pair[pair]
            if answer.orientation is not None:
                claimed = pair if answer.orientation is Orientation.FORWARD else pair[::-1]
                direction_ok = any((e.source, e.target) == claimed for e in ref_edges)
            if answer.polarity is not None:
                polarity_ok = any(e.polarity is answer.polarity for e in ref_edges)
        marks.append(
            LinkMark(
                pair=pair,
                answered=answer is not None,
                direction_correct=direction_ok,
                polarity_correct=polarity_ok,
            )
        )
    return tuple(marks)


def _as_fraction(value: Fraction | float | int) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def summarize(values: Sequence[Fraction | float | int]) -> ClassStats:
    """Mean, median, sample sd, and cv of a list of percentages."""
    if not values:
        raise EmptyInputError("no values to summarize")
    xs = sorted(_as_fraction(v) for v in values)
    n = len(xs)
    mean = sum(xs, Fraction(0)) / n
    median = (xs[(n - 1) // 2] + xs[n // 2]) / 2
    if n < 2:
        return ClassStats(n=n, mean=mean, median=median, sd=None, cv=None)
    variance = sum((x - mean) ** 2 for x in xs) / (n - 1)
    sd = math.sqrt(variance)
    cv = sd / float(mean) if mean > 0 else None
    return ClassStats(n=n, mean=mean, median=median, sd=sd, cv=cv)


def class_stats(reports: Sequence[ScoreReport], field: str = "direction_pct") -> ClassStats:
    """Cohort statistics over one percentage column of the score reports."""
    if field not in ("direction_pct", "polarity_pct"):
        raise ValueError(f"field must be direction_pct or polarity_pct, got {field!r}")
    if not reports:
        raise EmptyInputError("no score reports")
    return summarize([getattr(r, field) for r in reports])


@dataclass(frozen=True)
class CohortRow:
    student: str
    # One (direction_pct, polarity_pct) entry per activity, in activity order.
    scores: tuple[tuple[Fraction, Fraction], ...]


@dataclass(frozen=True)
class CohortTable:
    """Longitudinal view of the students present in every activity."""

    activities: tuple[str, ...]
    rows: tuple[CohortRow, ...]
    direction_stats: tuple[ClassStats, ...]
    polarity_stats: tuple[ClassStats, ...]


def cohort_track(activities: Sequence[tuple[str, Sequence[ScoreReport]]]) -> CohortTable:
    """Restrict to students who took part in every activity and summarize.

    Students are matched by identifier; row order follows the first activity.
    When a student appears twice within one activity the later report wins.
    """
    if not activities:
        raise EmptyInputError("no activities")
    by_activity: list[dict[str, ScoreReport]] = []
    for _, reports in activities:
        indexed: dict[str, ScoreReport] = {}
        for report in reports:
            indexed[report.student] = report
        by_activity.append(indexed)

    common = [s for s in by_activity[0] if all(s in idx for idx in by_activity)]
    if not common:
        raise NoCommonStudentsError("no student participated in every activity")

    rows = tuple(
        CohortRow(
            student=s,
            scores=tuple((idx[s].direction_pct, idx[s].polarity_pct) for idx in by_activity),
        )
        for s in common
    )
    direction_stats = tuple(
        summarize([row.scores[k][0] for row in rows]) for k in range(len(activities))
    )
    polarity_stats = tuple(
        summarize([row.scores[k][1] for row in rows]) for k in range(len(activities))
    )
    return CohortTable(
        activities=tuple(name for name, _ in activities),
        rows=rows,
        direction_stats=direction_stats,
        polarity_stats=polarity_stats,
    )


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _loop_cell(value: bool | None) -> str:
    if value is None:
        return ""
    return "yes" if value else "no"


def _text_table(rows: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def render_report(
    reports: Sequence[ScoreReport],
    stats: tuple[ClassStats, ClassStats] | None = None,
    fmt: str = "table-text",
) -> str:
    """Render score reports as a class table ('table-text') or CSV.

    Footer rows are Mean / Median / St Deviation / CV; percentages print
    with exactly two half-up decimals, matching the published tables.
    """
    if not reports:
        raise EmptyInputError("no score reports")
    if stats is None:
        stats = (class_stats(reports, "direction_pct"), class_stats(reports, "polarity_pct"))
    dir_stats, pol_stats = stats
    with_loop = any(r.loop_claim_correct is not None for r in reports)

    dir_counts = summarize([r.direction_correct for r in reports])
    pol_counts = summarize([r.polarity_correct for r in reports])

    def footer(label: str, pick) -> list[str]:
        cells = [label]
        for source in (dir_counts, pol_counts):
            value = pick(source)
            cells.append(format_stat(value) if value is not None else "")
        for source in (dir_stats, pol_stats):
            value = pick(source)
            cells.append(format_pct(value) if value is not None else "")
        if with_loop:
            cells.append("")
        return cells

    if fmt == "table-text":
        header = ["Student", "Direction", "Polarity", "Direction %", "Polarity %"]
        if with_loop:
            header.append("Loop")
        rows = [header]
        for r in reports:
            row = [
                r.student,
                str(r.direction_correct),
                str(r.polarity_correct),
                format_pct(r.direction_pct),
                format_pct(r.polarity_pct),
            ]
            if with_loop:
                row.append(_loop_cell(r.loop_claim_correct))
            rows.append(row)
        rows.append(footer("Mean", lambda s: s.mean))
        rows.append(footer("Median", lambda s: s.median))
        rows.append(footer("St Deviation", lambda s: s.sd))
        cv_row = ["CV", "", ""]
        cv_row.extend(format_stat(s.cv) if s.cv is not None else "" for s in (dir_stats, pol_stats))
        if with_loop:
            cv_row.append("")
        rows.append(cv_row)
        return _text_table(rows)

    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for r in reports:
            writer.writerow(
                [
                    r.student,
                    r.total_links,
                    r.direction_correct,
                    format_stat(r.direction_pct),
                    r.polarity_correct,
                    format_stat(r.polarity_pct),
                    _loop_cell(r.loop_claim_correct),
                ]
            )

        def stat_row(label: str, pick) -> list[str]:
            def cell(source) -> str:
                value = pick(source)
                return format_stat(value) if value is not None else ""

            return [f"#{label}", "", cell(dir_counts), cell(dir_stats), cell(pol_counts),
                    cell(pol_stats), ""]

        writer.writerow(stat_row("Mean", lambda s: s.mean))
        writer.writerow(stat_row("Median", lambda s: s.median))
        writer.writerow(stat_row("St Deviation", lambda s: s.sd))
        writer.writerow(
            ["#CV", "", "", format_stat(dir_stats.cv) if dir_stats.cv is not None else "", "",
             format_stat(pol_stats.cv) if pol_stats.cv is not None else "", ""]
        )
        return buffer.getvalue()

    raise ValueError(f"unknown format {fmt!r}; expected 'table-text' or 'csv'")


def render_cohort(table: CohortTable) -> str:
    """Longitudinal text table: one row per persistent student, stats footer."""
    header = ["Student"]
    for name in table.activities:
        header.extend([f"{name} Dir", f"{name} Pol"])
    rows = [header]
    for row in table.rows:
        cells = [row.student]
        for d, p in row.scores:
            cells.extend([format_pct(d), format_pct(p)])
        rows.append(cells)

    def footer(label: str, pick) -> list[str]:
        cells = [label]
        for d_stats, p_stats in zip(table.direction_stats, table.polarity_stats):
            for value in (pick(d_stats), pick(p_stats)):
                cells.append(format_pct(value) if value is not None else "")
        return cells

    rows.append(footer("Mean", lambda s: s.mean))
    rows.append(footer("Median", lambda s: s.median))
    rows.append(footer("St Deviation", lambda s: s.sd))
    cv_cells = ["CV"]
    for d_stats, p_stats in zip(table.direction_stats, table.polarity_stats):
        for s in (d_stats, p_stats):
            cv_cells.append(format_stat(s.cv) if s.cv is not None else "")
    rows.append(cv_cells)
    return _text_table(rows)


# ---------------------------------------------------------------------------
# CSV ingestion (the inverse of render_report's CSV) and JSON documents
# ---------------------------------------------------------------------------


def parse_report_csv(text: str) -> list[ScoreReport]:
    """Read a score CSV back; '#'-prefixed stat pseudo-rows are skipped."""
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and not row[0].startswith("#")]
    if not rows:
        raise EmptyInputError("empty CSV")
    header = [cell.strip() for cell in rows[0]]
    if header != CSV_HEADER.split(","):
        raise CausalEconError(f"unexpected CSV header: {','.join(header)!r}")
    reports = []
    for row in rows[1:]:
        if len(row) != 7:
            raise CausalEconError(f"bad CSV row: {row!r}")
        loop_cell = row[6].strip().lower()
        reports.append(
            ScoreReport(
                student=row[0],
                total_links=int(row[1]),
                direction_correct=int(row[2]),
                polarity_correct=int(row[4]),
                loop_claim_correct=None if loop_cell == "" else loop_cell == "yes",
            )
        )
    return reports


def score_report_to_dict(report: ScoreReport) -> dict:
    return {
        "student": report.student,
        "total_links": report.total_links,
        "direction_correct": report.direction_correct,
        "polarity_correct": report.polarity_correct,
        "direction_pct": float(report.direction_pct),
        "polarity_pct": float(report.polarity_pct),
        "direction_display": format_pct(report.direction_pct),
        "polarity_display": format_pct(report.polarity_pct),
        "loop_claim_correct": report.loop_claim_correct,
    }


def class_stats_to_dict(stats: ClassStats) -> dict:
    return {
        "n": stats.n,
        "mean": float(stats.mean),
        "median": float(stats.median),
        "sd": stats.sd,
        "cv": stats.cv,
        "mean_display": format_pct(stats.mean),
        "median_display": format_pct(stats.median),
        "sd_display": format_pct(stats.sd) if stats.sd is not None else None,
        "cv_display": format_stat(stats.cv) if stats.cv is not None else None,
    }
