"""File-backed workspace: diagrams on disk plus an append-only submission log.

Layout under the workspace root:

    diagrams/<name>.cdg          one DSL file per diagram (fixtures seeded)
    submissions/index.jsonl      append-only submission index
    submissions/<skeleton>/...   one .ans file per stored submission

Submissions are immutable once stored and keyed by (skeleton, student,
timestamp); repeat submissions by the same student are kept as versions and
read back latest-first. Writes are serialized by a lock; the index is
written one fsync'd line at a time so readers never see a torn record.
"""

from __future__ import annotations

import json
import os
import re
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .core import CausalDiagram, CausalEconError, CausalSkeleton, skeleton_of
from .fixtures import FIXTURES
from .formats import (
    ANSWER_SHEET_EXTENSION,
    DIAGRAM_EXTENSION,
    AnswerSheet,
    parse_answer_sheet,
    parse_diagram,
    serialize_answer_sheet,
    serialize_diagram,
)

ENV_WORKSPACE = "CAUSAL_ECON_WORKSPACE"
DEFAULT_ROOT = Path.home() / ".causal-econ"

_NAME_RE = re.compile(r"[A-Za-z0-9_.-]+")


class UnknownDiagramError(CausalEconError):
    code = "unknown-diagram"


class DuplicateSubmissionError(CausalEconError):
    code = "duplicate-submission"


class BadNameError(CausalEconError):
    code = "bad-name"


@dataclass(frozen=True)
class SubmissionRecord:
    skeleton: str
    student: str
    timestamp: str  # ISO 8601, UTC
    path: str  # relative to the workspace root

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.skeleton, self.student, self.timestamp)


def resolve_root(cli_value: str | os.PathLike | None = None) -> Path:
    """Workspace root: the environment variable wins over the CLI flag."""
    env = os.environ.get(ENV_WORKSPACE)
    if env:
        return Path(env)
    if cli_value is not None:
        return Path(cli_value)
    return DEFAULT_ROOT


def _check_name(name: str) -> str:
    if not _NAME_RE.fullmatch(name):
        raise BadNameError(f"{name!r} is not usable as a file name")
    return name


class Workspace:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self._write_lock = threading.Lock()

    @property
    def diagrams_dir(self) -> Path:
        return self.root / "diagrams"

    @property
    def submissions_dir(self) -> Path:
        return self.root / "submissions"

    @property
    def _index_path(self) -> Path:
        return self.submissions_dir / "index.jsonl"

    def ensure(self) -> "Workspace":
        """Create the directory layout and seed missing fixture files."""
        self.diagrams_dir.mkdir(parents=True, exist_ok=True)
        self.submissions_dir.mkdir(parents=True, exist_ok=True)
        for name, builder in FIXTURES.items():
            path = self.diagrams_dir / f"{name}{DIAGRAM_EXTENSION}"
            if not path.exists():
                path.write_text(serialize_diagram(builder()), encoding="utf-8")
        return self

    # -- diagrams ---------------------------------------------------------

    def diagram_names(self) -> list[str]:
        if not self.diagrams_dir.is_dir():
            return []
        return sorted(
            p.stem for p in self.diagrams_dir.glob(f"*{DIAGRAM_EXTENSION}") if p.is_file()
        )

    def load_diagram(self, name: str) -> CausalDiagram:
        path = self.diagrams_dir / f"{_check_name(name)}{DIAGRAM_EXTENSION}"
        if not path.is_file():
            raise UnknownDiagramError(f"no diagram named {name!r} in workspace")
        return parse_diagram(path.read_text(encoding="utf-8")).value_or_raise()

    def save_diagram(self, diagram: CausalDiagram) -> Path:
        path = self.diagrams_dir / f"{_check_name(diagram.name)}{DIAGRAM_EXTENSION}"
        self.diagrams_dir.mkdir(parents=True, exist_ok=True)
        path.write_text(serialize_diagram(diagram), encoding="utf-8")
        return path

    def load_skeleton(self, name: str) -> CausalSkeleton:
        return skeleton_of(self.load_diagram(name))

    def resolve_diagram(self, ref: str) -> CausalDiagram:
        """Resolve a CLI diagram reference: a path, a workspace name, or a
        built-in fixture name (with or without the .cdg suffix)."""
        path = Path(ref)
        if path.is_file():
            return parse_diagram(path.read_text(encoding="utf-8")).value_or_raise()
        name = path.stem if ref.endswith(DIAGRAM_EXTENSION) else ref
        if _NAME_RE.fullmatch(name):
            try:
                return self.load_diagram(name)
            except UnknownDiagramError:
                pass
            if name in FIXTURES:
                return FIXTURES[name]()
        raise UnknownDiagramError(f"cannot resolve diagram reference {ref!r}")

    # -- submissions ------------------------------------------------------

    def store_submission(
        self, sheet: AnswerSheet, timestamp: str | None = None
    ) -> SubmissionRecord:
        """Persist a sheet; (skeleton, student, timestamp) must be unique."""
        _check_name(sheet.skeleton)
        if timestamp is None:
            timestamp = datetime.now(timezone.utc).isoformat(timespec="microseconds")
        with self._write_lock:
            existing = {rec.key for rec in self._read_index()}
            record_key = (sheet.skeleton, sheet.student, timestamp)
            if record_key in existing:
                raise DuplicateSubmissionError(
                    f"submission already stored for {record_key!r}"
                )
            folder = self.submissions_dir / sheet.skeleton
            folder.mkdir(parents=True, exist_ok=True)
            slug = re.sub(r"[^A-Za-z0-9_.-]+", "-", sheet.student) or "anonymous"
            stamp = re.sub(r"[^0-9TZ]", "", timestamp)
            base = f"{slug}__{stamp}"
            path = folder / f"{base}{ANSWER_SHEET_EXTENSION}"
            n = 1
            while path.exists():
                path = folder / f"{base}_{n}{ANSWER_SHEET_EXTENSION}"
                n += 1
            path.write_text(serialize_answer_sheet(sheet), encoding="utf-8")
            record = SubmissionRecord(
                skeleton=sheet.skeleton,
                student=sheet.student,
                timestamp=timestamp,
                path=str(path.relative_to(self.root)),
            )
            self._append_index(record)
        return record

    def _append_index(self, record: SubmissionRecord) -> None:
        self.submissions_dir.mkdir(parents=True, exist_ok=True)
        line = json.dumps(
            {
                "skeleton": record.skeleton,
                "student": record.student,
                "timestamp": record.timestamp,
                "path": record.path,
            }
        )
        with open(self._index_path, "a", encoding="utf-8") as handle:
            handle.write(line + "\n")
            handle.flush()
            os.fsync(handle.fileno())

    def _read_index(self) -> list[SubmissionRecord]:
        if not self._index_path.is_file():
            return []
        records = []
        for line in self._index_path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError:
                continue  # torn trailing write; ignore the partial record
            records.append(
                SubmissionRecord(
                    skeleton=doc["skeleton"],
                    student=doc["student"],
                    timestamp=doc["timestamp"],
                    path=doc["path"],
                )
            )
        return records

    def submissions(
        self, skeleton: str | None = None, latest_only: bool = False
    ) -> list[SubmissionRecord]:
        """Stored submissions, oldest first; ``latest_only`` keeps each
        student's most recent attempt per skeleton."""
        records = self._read_index()
        if skeleton is not None:
            records = [r for r in records if r.skeleton == skeleton]
        records.sort(key=lambda r: (r.skeleton, r.timestamp, r.student))
        if latest_only:
            latest: dict[tuple[str, str], SubmissionRecord] = {}
            for record in records:
                latest[(record.skeleton, record.student)] = record
            records = sorted(latest.values(), key=lambda r: (r.skeleton, r.timestamp, r.student))
        return records

    def load_submission(self, record: SubmissionRecord) -> AnswerSheet:
        skeleton = self.load_skeleton(record.skeleton)
        text = (self.root / record.path).read_text(encoding="utf-8")
        return parse_answer_sheet(text, skeleton).value_or_raise()
