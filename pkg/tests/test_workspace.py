import threading

import pytest

from causalecon.core import skeleton_of
from causalecon.fixtures import multiplier, price_revenue
from causalecon.formats import perfect_sheet, serialize_diagram
from causalecon.workspace import (
    ENV_WORKSPACE,
    BadNameError,
    DuplicateSubmissionError,
    UnknownDiagramError,
    Workspace,
    resolve_root,
)


@pytest.fixture
def workspace(tmp_path):
    return Workspace(tmp_path / "ws").ensure()


class TestResolveRoot:
    def test_env_overrides_flag(self, monkeypatch, tmp_path):
        monkeypatch.setenv(ENV_WORKSPACE, str(tmp_path / "from_env"))
        assert resolve_root(tmp_path / "from_flag").name == "from_env"

    def test_flag_when_no_env(self, monkeypatch, tmp_path):
        monkeypatch.delenv(ENV_WORKSPACE, raising=False)
        assert resolve_root(tmp_path / "from_flag").name == "from_flag"


class TestDiagrams:
    def test_ensure_seeds_fixtures(self, workspace):
        assert workspace.diagram_names() == [
            "multiplier", "national_income_subset", "price_revenue",
        ]
        assert workspace.load_diagram("multiplier") == multiplier()

    def test_ensure_does_not_clobber_edits(self, workspace):
        path = workspace.diagrams_dir / "price_revenue.cdg"
        path.write_text("diagram price_revenue\n", encoding="utf-8")
        workspace.ensure()
        assert workspace.load_diagram("price_revenue").variables == ()

    def test_save_and_load(self, workspace):
        d = price_revenue()
        renamed = type(d)(name="pricing", variables=d.variables, edges=d.edges)
        workspace.save_diagram(renamed)
        assert workspace.load_diagram("pricing") == renamed

    def test_unknown_name(self, workspace):
        with pytest.raises(UnknownDiagramError):
            workspace.load_diagram("ghost")

    def test_bad_name(self, workspace):
        with pytest.raises(BadNameError):
            workspace.load_diagram("../../etc/passwd")

    def test_resolve_path_name_and_fixture(self, workspace, tmp_path):
        file_path = tmp_path / "standalone.cdg"
        file_path.write_text(serialize_diagram(price_revenue()), encoding="utf-8")
        assert workspace.resolve_diagram(str(file_path)) == price_revenue()
        assert workspace.resolve_diagram("multiplier") == multiplier()
        assert workspace.resolve_diagram("multiplier.cdg") == multiplier()
        empty = Workspace(tmp_path / "empty_ws")  # no ensure(): falls back to fixtures
        assert empty.resolve_diagram("multiplier") == multiplier()
        with pytest.raises(UnknownDiagramError):
            workspace.resolve_diagram("no_such_thing")


class TestSubmissions:
    def test_store_and_read_back(self, workspace):
        sheet = perfect_sheet(multiplier(), "Ada")
        record = workspace.store_submission(sheet, timestamp="2026-02-01T10:00:00+00:00")
        assert record.key == ("multiplier", "Ada", "2026-02-01T10:00:00+00:00")
        assert workspace.load_submission(record) == sheet
        assert workspace.submissions("multiplier") == [record]

    def test_duplicate_key_rejected(self, workspace):
        sheet = perfect_sheet(multiplier(), "Ada")
        workspace.store_submission(sheet, timestamp="2026-02-01T10:00:00+00:00")
        with pytest.raises(DuplicateSubmissionError):
            workspace.store_submission(sheet, timestamp="2026-02-01T10:00:00+00:00")

    def test_latest_only_keeps_newest_per_student(self, workspace):
        sheet = perfect_sheet(multiplier(), "Ada")
        workspace.store_submission(sheet, timestamp="2026-02-01T10:00:00+00:00")
        workspace.store_submission(sheet, timestamp="2026-02-02T10:00:00+00:00")
        other = perfect_sheet(multiplier(), "Bo")
        workspace.store_submission(other, timestamp="2026-02-01T12:00:00+00:00")
        every = workspace.submissions("multiplier")
        assert len(every) == 3
        latest = workspace.submissions("multiplier", latest_only=True)
        assert {(r.student, r.timestamp) for r in latest} == {
            ("Ada", "2026-02-02T10:00:00+00:00"),
            ("Bo", "2026-02-01T12:00:00+00:00"),
        }

    def test_filter_by_skeleton(self, workspace):
        workspace.store_submission(perfect_sheet(multiplier(), "Ada"))
        workspace.store_submission(perfect_sheet(price_revenue(), "Ada"))
        assert len(workspace.submissions("multiplier")) == 1
        assert len(workspace.submissions()) == 2

    def test_torn_index_line_is_ignored(self, workspace):
        sheet = perfect_sheet(multiplier(), "Ada")
        record = workspace.store_submission(sheet)
        with open(workspace._index_path, "a", encoding="utf-8") as fh:
            fh.write('{"skeleton": "multiplier", "stu')  # torn write, no newline
        assert workspace.submissions("multiplier") == [record]

    def test_filename_slugging_avoids_collisions(self, workspace):
        a = perfect_sheet(multiplier(), "a b")
        b = perfect_sheet(multiplier(), "a_b")
        ts = "2026-02-01T10:00:00+00:00"
        first = workspace.store_submission(a, timestamp=ts)
        second = workspace.store_submission(b, timestamp=ts)
        assert first.path != second.path
        assert workspace.load_submission(first).student == "a b"
        assert workspace.load_submission(second).student == "a_b"

    def test_concurrent_writers_serialize(self, workspace):
        sheet = perfect_sheet(multiplier(), "racer")
        errors = []

        def store(k):
            try:
                workspace.store_submission(sheet, timestamp=f"2026-02-01T10:00:{k:02d}+00:00")
            except Exception as exc:  # pragma: no cover
                errors.append(exc)

        threads = [threading.Thread(target=store, args=(k,)) for k in range(16)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        assert len(workspace.submissions("multiplier")) == 16

    def test_skeleton_helper(self, workspace):
        assert workspace.load_skeleton("multiplier") == skeleton_of(multiplier())
