"""End-to-end tests for the command line."""

import json

import pytest
from typer.testing import CliRunner

from rdlab.cli.main import app

runner = CliRunner()


def invoke(*args):
    return runner.invoke(app, [*args, "--log-level", "ERROR"])


class TestCheck:

    def test_cone_closure(self):
        result = invoke("check", "lem5.1d.cone-closure", "--n", "4", "--q", "2")
        assert result.exit_code == 0, result.output
        assert "pass" in result.output

    @pytest.mark.slow
    def test_cone_closure_in_characteristic_seven(self):
        result = invoke("check", "lem5.1d.cone-closure", "--n", "7", "--q", "7")
        assert result.exit_code == 0, result.output

    def test_unitary_invariance_id(self):
        result = invoke("check", "prop3.1b.unit-invariance", "--n", "3", "--q", "2")
        assert result.exit_code == 0, result.output

    def test_minimum_vanishing_degree(self):
        result = invoke("check", "prop3.1b.min-vanish", "--n", "3", "--q", "2")
        assert result.exit_code == 0, result.output
        assert '"min_degree": 5' in result.output

    def test_unknown_id(self):
        result = invoke("check", "nosuch")
        assert result.exit_code == 2
        assert "nosuch" in result.output

    def test_negative_control_fails_the_run(self):
        result = invoke("check", "rem5.2.lucas-condition.negative")
        assert result.exit_code == 1
        assert "residues" in result.output

    def test_bad_format(self):
        result = invoke("check", "lem5.1d.cone-closure", "--format", "yaml")
        assert result.exit_code == 2


class TestVerifyAll:

    def test_reports_are_reproducible(self, tmp_path):
        outputs = []
        for name in ("a.jsonl", "b.jsonl"):
            out = tmp_path / name
            result = invoke("verify-all", "--select", "rem5.2.lucas-*", "--seed", "42", "--jobs", "1", "--out", str(out))
            assert result.exit_code == 0, result.output
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]
        records = [json.loads(line) for line in outputs[0].decode("utf-8").splitlines()]
        assert [r['id'] for r in records] == ["rem5.2.lucas-condition"]
        assert all('elapsed' not in r for r in records)

    def test_negative_controls_flag(self, tmp_path):
        out = tmp_path / "run.jsonl"
        result = invoke("verify-all", "--select", "rem5.2.lucas-*", "--negative-controls", "--jobs", "1", "--out", str(out))
        assert result.exit_code == 1
        control = json.loads(out.read_text(encoding="utf-8").splitlines()[-1])
        assert control['status'] == "fail"
        assert control['witness'] == {'residues': {'1': 0, '2': 1, '3': 0}}

    def test_with_timings(self, tmp_path):
        out = tmp_path / "run.jsonl"
        result = invoke("verify-all", "--select", "rem5.2.lucas-*", "--with-timings", "--jobs", "1", "--out", str(out))
        assert result.exit_code == 0, result.output
        assert 'elapsed' in json.loads(out.read_text(encoding="utf-8"))

    def test_plain_report(self, tmp_path):
        out = tmp_path / "run.md"
        result = invoke("verify-all", "--select", "rem5.2.lucas-*", "--format", "plain", "--jobs", "1", "--out", str(out))
        assert result.exit_code == 0, result.output
        assert out.read_text(encoding="utf-8").startswith("# Verification report")

    def test_no_match(self):
        result = invoke("verify-all", "--select", "nothing.*", "--jobs", "1")
        assert result.exit_code == 2


class TestEngineCommands:

    def test_table(self, tmp_path):
        out = tmp_path / "table.jsonl"
        result = invoke("table", "--out", str(out))
        assert result.exit_code == 0, result.output
        records = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
        assert {'bound': 3, 'group': "S8", 'p': 2} in records
        assert len(records) == 20

    def test_plain_table(self, tmp_path):
        out = tmp_path / "table.txt"
        result = invoke("table", "--format", "plain", "--out", str(out))
        assert result.exit_code == 0, result.output
        assert out.read_text(encoding="utf-8").splitlines()[3].split() == ["S7", "3", "3", "2", "2", "2"]

    def test_table_with_underivable_cells(self, tmp_path):
        facts = tmp_path / "tiny.facts"
        facts.write_text('axiom bound group=S5 p=0 bound=1 cite "Bring"\n', encoding="utf-8")
        result = invoke("table", "--fact-base", str(facts))
        assert result.exit_code == 2
        assert "Underivable" in result.output

    def test_explain(self):
        result = invoke("explain", "S7", "3", "--format", "plain")
        assert result.exit_code == 0, result.output
        assert "Table 8.11" in result.output

    def test_explain_structured(self):
        result = invoke("explain", "S8", "2")
        assert result.exit_code == 0, result.output
        trace = json.loads(result.output.strip().splitlines()[-1])
        assert trace['rule'] == "cone-base"

    def test_explain_absent(self):
        result = invoke("explain", "S9", "0")
        assert result.exit_code == 1

    def test_relate(self):
        result = invoke("relate", "S7", "S6", "5")
        assert result.exit_code == 0, result.output
        assert "rd_5(S7) = rd_5(S6)" in result.output

    def test_bad_fact_base(self, tmp_path):
        facts = tmp_path / "bad.facts"
        facts.write_text("axiom bound group=S5 p=0 bound=1\n", encoding="utf-8")
        result = invoke("explain", "S5", "0", "--fact-base", str(facts))
        assert result.exit_code == 2


@pytest.mark.parametrize("flags", [[], ["--negative-controls", "--heavy"]])
def test_list(flags):
    result = runner.invoke(app, ["list", *flags])
    assert result.exit_code == 0, result.output
    assert "lem5.1d.cone-closure" in result.output


def test_exact_id_runs_its_control(tmp_path):
    out = tmp_path / "run.jsonl"
    result = invoke("verify-all", "--select", "rem5.2.lucas-condition", "--jobs", "1", "--out", str(out))
    assert result.exit_code == 1
    assert len(out.read_text(encoding="utf-8").splitlines()) == 2
