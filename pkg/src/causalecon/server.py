"""HTTP service exposing the engines over JSON documents.

Every response mirrors the domain types; engine errors come back as
``{"code", "message", "span"?, "diagnostics"?}`` with a 4xx status. The
service is stateless apart from the file-backed submission store.
"""

from __future__ import annotations

import json
from typing import Mapping

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .core import CausalDiagram, CausalEconError, enumerate_loops, skeleton_of
from .formats import (
    DocumentError,
    ParseFailedError,
    Severity,
    diagram_from_dict,
    diagram_to_dict,
    parse_answer_sheet,
    parse_diagram,
    sheet_from_dict,
    sheet_to_dict,
    skeleton_to_dict,
    trace_to_dict,
    verdict_to_dict,
)
from .grading import (
    class_stats,
    class_stats_to_dict,
    grade,
    link_breakdown,
    score_report_to_dict,
)
from .multiplier import MultiplierParams, trace_g, trace_t
from .propagation import Direction, Shock, propagate, propagate_all
from .workspace import UnknownDiagramError, Workspace

_STATUS_BY_CODE = {
    "unknown-diagram": 404,
    "duplicate-submission": 409,
}

_DIRECTIONS = {
    "up": Direction.INCREASE,
    "increase": Direction.INCREASE,
    "down": Direction.DECREASE,
    "decrease": Direction.DECREASE,
}


def _error_response(exc: CausalEconError) -> JSONResponse:
    body: dict = {"code": exc.code, "message": str(exc)}
    if isinstance(exc, ParseFailedError):
        body["diagnostics"] = [
            {
                "severity": d.severity.value,
                "code": d.code,
                "message": d.message,
                "span": {"line": d.span.line, "column": d.span.column, "length": d.span.length},
            }
            for d in exc.diagnostics
        ]
        first = next((d for d in exc.diagnostics if d.severity is Severity.ERROR), None)
        if first:
            body["span"] = {
                "line": first.span.line,
                "column": first.span.column,
                "length": first.span.length,
            }
    return JSONResponse(body, status_code=_STATUS_BY_CODE.get(exc.code, 400))


async def _json_body(request: Request) -> Mapping:
    try:
        doc = json.loads(await request.body())
    except json.JSONDecodeError as exc:
        raise DocumentError(f"request body is not valid JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise DocumentError("request body must be a JSON object")
    return doc


def create_app(workspace: Workspace) -> FastAPI:
    workspace.ensure()
    app = FastAPI(title="causal-econ", version="0.1.0")

    @app.exception_handler(CausalEconError)
    async def _on_engine_error(_request: Request, exc: CausalEconError):
        return _error_response(exc)

    @app.exception_handler(RequestValidationError)
    async def _on_request_error(_request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(part) for part in first.get("loc", ()))
        message = f"{where}: {first.get('msg', 'invalid request')}" if where else "invalid request"
        return JSONResponse({"code": "invalid-request", "message": message}, status_code=400)

    def _diagram_from_ref(ref) -> CausalDiagram:
        """A diagram reference: a stored name or an inline document."""
        if isinstance(ref, str):
            return workspace.load_diagram(ref)
        if isinstance(ref, Mapping):
            return diagram_from_dict(ref)
        raise DocumentError("diagram reference must be a name or a diagram object")

    @app.get("/diagrams")
    async def list_diagrams():
        return {"diagrams": workspace.diagram_names()}

    @app.get("/diagrams/{name}")
    async def get_diagram(name: str):
        return diagram_to_dict(workspace.load_diagram(name))

    @app.put("/diagrams/{name}")
    async def put_diagram(name: str, request: Request):
        content_type = request.headers.get("content-type", "")
        raw = await request.body()
        if content_type.startswith("application/json"):
            doc = json.loads(raw) if raw else None
            if not isinstance(doc, Mapping):
                raise DocumentError("expected a diagram document object")
            diagram = diagram_from_dict(doc)
        else:
            diagram = parse_diagram(raw.decode("utf-8")).value_or_raise()
        if diagram.name != name:
            raise DocumentError(
                f"diagram is named {diagram.name!r} but was PUT to /diagrams/{name}"
            )
        created = name not in workspace.diagram_names()
        workspace.save_diagram(diagram)
        return JSONResponse(diagram_to_dict(diagram), status_code=201 if created else 200)

    @app.get("/skeletons")
    async def list_skeletons():
        return {"skeletons": workspace.diagram_names()}

    @app.get("/skeletons/{name}")
    async def get_skeleton(name: str):
        return skeleton_to_dict(skeleton_of(workspace.load_diagram(name)))

    @app.get("/loops/{name}")
    async def get_loops(name: str):
        loops = enumerate_loops(workspace.load_diagram(name))
        return {
            "loops": [
                {"variables": list(loop.variables), "polarity": loop.polarity.value}
                for loop in loops
            ],
            "truncated": loops.truncated,
        }

    @app.post("/propagate")
    async def post_propagate(request: Request):
        body = await _json_body(request)
        diagram = _diagram_from_ref(body.get("diagram"))
        shock_doc = body.get("shock")
        if not isinstance(shock_doc, Mapping) or "var" not in shock_doc:
            raise DocumentError('propagate body needs "shock": {"var": ..., "dir": ...}')
        direction = _DIRECTIONS.get(str(shock_doc.get("dir", "")).lower())
        if direction is None:
            raise DocumentError('shock "dir" must be one of up/down/increase/decrease')
        shock = Shock(variable=str(shock_doc["var"]), direction=direction)
        freeze = body.get("freeze") or []
        if not isinstance(freeze, list):
            raise DocumentError('"freeze" must be a list of variable ids')
        frozen = [str(v) for v in freeze]
        target = body.get("target")
        if target is not None:
            verdict = propagate(diagram, shock, str(target), frozen)
            return verdict_to_dict(verdict)
        verdicts = propagate_all(diagram, shock, frozen)
        return {"verdicts": {vid: verdict_to_dict(v) for vid, v in verdicts.items()}}

    @app.post("/grade")
    async def post_grade(request: Request):
        body = await _json_body(request)
        reference = _diagram_from_ref(body.get("reference"))
        sheet_doc = body.get("sheet")
        if isinstance(sheet_doc, str):
            sheet = parse_answer_sheet(sheet_doc, skeleton_of(reference)).value_or_raise()
        elif isinstance(sheet_doc, Mapping):
            sheet = sheet_from_dict(sheet_doc)
        else:
            raise DocumentError('grade body needs "sheet": answer sheet document or DSL text')
        body = score_report_to_dict(grade(reference, sheet))
        body["links"] = [
            {
                "pair": list(mark.pair),
                "answered": mark.answered,
                "direction_correct": mark.direction_correct,
                "polarity_correct": mark.polarity_correct,
            }
            for mark in link_breakdown(reference, sheet)
        ]
        return body

    @app.get("/multiplier")
    async def get_multiplier(kind: str, mpc: float, delta: float = 1.0, rounds: int = 5):
        if kind == "g":
            trace = trace_g(MultiplierParams(mpc=mpc, delta_g=delta), rounds)
        elif kind == "t":
            trace = trace_t(MultiplierParams(mpc=mpc, delta_t=delta), rounds)
        else:
            raise DocumentError("kind must be 'g' or 't'")
        return trace_to_dict(trace)

    @app.post("/submissions")
    async def post_submission(request: Request):
        body = await _json_body(request)
        sheet_doc = body.get("sheet", body)
        timestamp = body.get("timestamp")
        if isinstance(sheet_doc, str):
            skeleton_name = body.get("skeleton")
            if not isinstance(skeleton_name, str):
                raise DocumentError('text submissions need a "skeleton" name')
            skeleton = skeleton_of(workspace.load_diagram(skeleton_name))
            sheet = parse_answer_sheet(sheet_doc, skeleton).value_or_raise()
        elif isinstance(sheet_doc, Mapping):
            sheet = sheet_from_dict(sheet_doc)
            skeleton = skeleton_of(workspace.load_diagram(sheet.skeleton))
            # Text sheets were validated during parsing; document sheets are
            # validated here so stored submissions always fit their skeleton.
            stray = [a.pair for a in sheet.answers if a.pair not in skeleton.link_set]
            if stray:
                raise DocumentError(f"answer on {stray[0][0]}--{stray[0][1]}: not a skeleton link")
        else:
            raise DocumentError('submission body needs a "sheet"')
        record = workspace.store_submission(
            sheet, timestamp=str(timestamp) if timestamp is not None else None
        )
        return JSONResponse(
            {
                "skeleton": record.skeleton,
                "student": record.student,
                "timestamp": record.timestamp,
                "path": record.path,
            },
            status_code=201,
        )

    @app.get("/submissions/latest")
    async def latest_submission(skeleton: str, student: str):
        records = [
            r
            for r in workspace.submissions(skeleton, latest_only=True)
            if r.student == student
        ]
        if not records:
            raise UnknownDiagramError(
                f"no submission stored for {student!r} on {skeleton!r}"
            )
        record = records[-1]
        return {
            "skeleton": record.skeleton,
            "student": record.student,
            "timestamp": record.timestamp,
            "sheet": sheet_to_dict(workspace.load_submission(record)),
        }

    @app.get("/submissions")
    async def list_submissions(skeleton: str | None = None, all_attempts: bool = False):
        records = workspace.submissions(skeleton, latest_only=not all_attempts)
        return {
            "submissions": [
                {
                    "skeleton": r.skeleton,
                    "student": r.student,
                    "timestamp": r.timestamp,
                    "path": r.path,
                }
                for r in records
            ]
        }

    @app.get("/stats")
    async def get_stats(skeleton: str, all_attempts: bool = False):
        reference = workspace.load_diagram(skeleton)
        records = workspace.submissions(skeleton, latest_only=not all_attempts)
        if not records:
            raise UnknownDiagramError(f"no submissions stored for {skeleton!r}")
        reports = [grade(reference, workspace.load_submission(r)) for r in records]
        return {
            "skeleton": skeleton,
            "n": len(reports),
            "students": [r.student for r in reports],
            "direction": class_stats_to_dict(class_stats(reports, "direction_pct")),
            "polarity": class_stats_to_dict(class_stats(reports, "polarity_pct")),
        }

    return app
