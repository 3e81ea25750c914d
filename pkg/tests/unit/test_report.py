"""Tests for check reports and run summaries."""

import json

import numpy as np
import pytest

from rdlab.models.report import CheckReport, CheckStatus, RunSummary, jsonable
from rdlab.utils.errors import BudgetExceededError


def _report(status=CheckStatus.PASS, **kwargs):
    return CheckReport(check_id="lem5.1d.cone-closure", status=status, params={'n': 4, 'q': 2}, **kwargs)


class TestJsonable:

    def test_numpy_values(self):
        assert jsonable(np.int64(7)) == 7
        assert jsonable(np.array([[1, 2], [3, 4]])) == [[1, 2], [3, 4]]
        assert jsonable(np.float64(1 / 3)) == 0.333333

    def test_containers(self):
        assert jsonable({3: (1, 2)}) == {'3': [1, 2]}
        assert jsonable({3, 1, 2}) == [1, 2, 3]
        assert jsonable(CheckStatus.FAIL) == "fail"

    def test_objects_with_serializers(self):
        class Point:
            def to_serial(self):
                return (0, 1, np.int32(2))

        assert jsonable(Point()) == [0, 1, 2]


class TestCheckReport:

    @pytest.mark.parametrize("status,negative,ok", [
        (CheckStatus.PASS, False, True),
        (CheckStatus.EVIDENCE, False, True),
        (CheckStatus.FAIL, False, False),
        (CheckStatus.FAIL, True, True),
        (CheckStatus.PASS, True, False),
    ])
    def test_ok(self, status, negative, ok):
        assert _report(status, negative_control=negative).ok is ok

    def test_json_omits_timings_by_default(self):
        report = _report(elapsed=1.23456, seed=42)
        data = json.loads(report.to_json())
        assert 'elapsed' not in data
        assert data['id'] == "lem5.1d.cone-closure"
        assert data['status'] == "pass"
        assert data['seed'] == 42
        assert json.loads(report.to_json(with_timings=True))['elapsed'] == 1.235

    def test_json_is_canonical(self):
        a = _report(stats={'b': 1, 'a': 2})
        b = _report(stats={'a': 2, 'b': 1})
        assert a.to_json() == b.to_json()

    def test_markdown(self):
        md = _report(CheckStatus.FAIL, anchor="claim", witness={'point': (0, 1)}, message="broken").to_markdown()
        assert md.startswith("### lem5.1d.cone-closure: FAIL")
        assert "**Claim:** claim" in md
        assert "- point: [0, 1]" in md
        assert "Elapsed" not in md

    def test_errored(self):
        exc = BudgetExceededError("too many points", resource="projective_points", limit=10, requested=20, hint="raise it")
        report = CheckReport.errored("lem5.1c.y123-free", {'n': 7}, exc, "anchor", 42)
        assert report.status is CheckStatus.ERROR
        assert report.message == "BudgetExceededError: too many points"
        assert report.witness == {'details': {'hint': "raise it"}}
        assert report.ok


class TestRunSummary:

    def test_counts_and_exit_code(self):
        summary = RunSummary([_report(), _report(CheckStatus.ERROR), _report(CheckStatus.EVIDENCE)], seed=1)
        assert summary.counts == {'pass': 1, 'fail': 0, 'evidence': 1, 'inconclusive': 0, 'error': 1}
        assert summary.exit_code == 0
        summary.reports.append(_report(CheckStatus.FAIL))
        assert summary.exit_code == 1

    def test_failing_negative_control_fails_the_run(self):
        summary = RunSummary([_report(CheckStatus.FAIL, negative_control=True), _report()])
        assert summary.exit_code == 1
        assert summary.unexpected == []

    def test_unexpected_reports(self):
        passing_control = _report(negative_control=True)
        summary = RunSummary([passing_control, _report(CheckStatus.ERROR)])
        assert summary.exit_code == 0
        assert summary.unexpected == [passing_control]

    def test_jsonl(self):
        summary = RunSummary([_report(), _report(CheckStatus.FAIL)], seed=3)
        lines = summary.to_jsonl().splitlines()
        assert [json.loads(line)['status'] for line in lines] == ["pass", "fail"]

    def test_save(self, tmp_path):
        summary = RunSummary([_report()], seed=3)
        structured = summary.save(tmp_path / "nested" / "r.jsonl")
        assert structured.read_text(encoding="utf-8") == summary.to_jsonl()
        plain = summary.save(tmp_path / "r.md", report_format="plain")
        text = plain.read_text(encoding="utf-8")
        assert text.startswith("# Verification report")
        assert "pass=1" in text
