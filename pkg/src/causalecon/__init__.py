"""Qualitative causal-diagram toolkit for macroeconomics instruction.

Encode signed causal diagrams, answer what-if questions by sign propagation,
trace government-purchases and tax multipliers, and grade student-completed
causal skeletons with class statistics.
"""

from .core import (
    CausalDiagram,
    CausalEconError,
    CausalEdge,
    CausalSkeleton,
    DiagramValidationError,
    FeedbackLoop,
    LoopPolarity,
    LoopSet,
    Polarity,
    Variable,
    build_diagram,
    build_skeleton,
    enumerate_loops,
    loop_polarity,
    sign_product,
    skeleton_of,
)
from .fixtures import fixture, fixture_names
from .formats import (
    AnswerSheet,
    LinkAnswer,
    Orientation,
    ParseDiagnostic,
    ParseResult,
    Severity,
    SourceSpan,
    export_dot,
    parse_answer_sheet,
    parse_diagram,
    parse_skeleton,
    perfect_sheet,
    serialize_answer_sheet,
    serialize_diagram,
    serialize_skeleton,
)
from .grading import ClassStats, ScoreReport, class_stats, cohort_track, grade, render_report
from .multiplier import (
    IterationTrace,
    MultiplierParams,
    TraceKind,
    g_multiplier,
    loop_consistency_check,
    t_multiplier,
    trace_g,
    trace_t,
)
from .propagation import (
    Direction,
    Outcome,
    PropagationVerdict,
    Shock,
    WitnessPath,
    answer_mcq,
    propagate,
    propagate_all,
)

__version__ = "0.1.0"

__all__ = [
    "AnswerSheet",
    "CausalDiagram",
    "CausalEconError",
    "CausalEdge",
    "CausalSkeleton",
    "ClassStats",
    "DiagramValidationError",
    "Direction",
    "FeedbackLoop",
    "IterationTrace",
    "LinkAnswer",
    "LoopPolarity",
    "LoopSet",
    "MultiplierParams",
    "Orientation",
    "Outcome",
    "ParseDiagnostic",
    "ParseResult",
    "Polarity",
    "PropagationVerdict",
    "ScoreReport",
    "Severity",
    "Shock",
    "SourceSpan",
    "TraceKind",
    "Variable",
    "WitnessPath",
    "answer_mcq",
    "build_diagram",
    "build_skeleton",
    "class_stats",
    "cohort_track",
    "enumerate_loops",
    "export_dot",
    "fixture",
    "fixture_names",
    "g_multiplier",
    "grade",
    "loop_consistency_check",
    "loop_polarity",
    "parse_answer_sheet",
    "parse_diagram",
    "parse_skeleton",
    "perfect_sheet",
    "propagate",
    "propagate_all",
    "render_report",
    "serialize_answer_sheet",
    "serialize_diagram",
    "serialize_skeleton",
    "sign_product",
    "skeleton_of",
    "t_multiplier",
    "trace_g",
    "trace_t",
]
