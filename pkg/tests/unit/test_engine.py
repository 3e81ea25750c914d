"""Tests for bound derivation, traces, replay and symbolic comparison."""

import pytest

from rdlab.checks.bounds import EXPECTED_TABLE
from rdlab.engine.engine import BoundEngine, DerivationTrace
from rdlab.engine.facts import parse_fact_text
from rdlab.utils.errors import AbsentFactError, SoundnessError, UnderivableCellError

CHARACTERISTICS = (0, 2, 3, 5, 7)


class TestTable:

    @pytest.mark.parametrize("group,row", list(EXPECTED_TABLE.items()))
    def test_rows(self, engine, group, row):
        table = engine.table([group], CHARACTERISTICS)
        assert table.row(group) == list(row)

    def test_text_rendering(self, engine):
        text = engine.table(list(EXPECTED_TABLE), CHARACTERISTICS).to_text()
        lines = text.splitlines()
        assert lines[0].split() == ["G", "p=0", "p=2", "p=3", "p=5", "p=7"]
        assert lines[2].split() == ["S6", "2", "2", "1", "2", "2"]

    def test_records(self, engine):
        records = engine.table(["S8"], CHARACTERISTICS).to_records()
        assert records[1] == {'group': "S8", 'p': 2, 'bound': 3}

    def test_underivable_cells(self, engine):
        with pytest.raises(UnderivableCellError) as exc:
            engine.table(["S9"], (0,))
        assert exc.value.cells == [("S9", 0)]
        loose = engine.table(["S9"], (0,), strict=False)
        assert loose.row("S9") == [None]
        assert "-" in loose.to_text()

    def test_fixpoint_reached(self, engine):
        assert engine.rounds >= 2
        assert engine.bound("S7", 5) == 2


class TestTraces:

    def test_s7_in_characteristic_three(self, engine):
        trace = engine.explain("S7", 3)
        assert isinstance(trace, DerivationTrace)
        assert trace.claim == "rd_3(S7) ≤ 2"
        assert any("Table 8.11" in leaf for leaf in trace.leaves())
        assert "hypersurface" in trace.rules_used()

    def test_s8_in_characteristic_two_uses_the_cone(self, engine):
        trace = engine.explain("S8", 2)
        assert trace.bound == 3
        assert "cone-base" in trace.rules_used()
        assert "cone-base" in trace.render()

    def test_s6_in_characteristic_three(self, engine):
        trace = engine.explain("S6", 3)
        assert trace.bound == 1
        assert "isomorphism" in trace.rules_used()
        assert "invariant-variety" in trace.rules_used()

    def test_axiom_leaf(self, engine):
        trace = engine.explain("S6", 0)
        assert trace.rule_id == "axiom"
        assert trace.leaves() == [trace.anchor]
        assert trace.to_dict()['premises'] == []

    def test_absent_fact(self, engine):
        with pytest.raises(AbsentFactError):
            engine.fact("S9", 0)

    def test_every_fact_replays(self, engine):
        assert engine.replay_all() == len(engine.facts())


class TestReplay:

    def test_forged_axiom_is_rejected(self, engine):
        trace = engine.explain("S6", 0)
        trace.bound = 1
        with pytest.raises(SoundnessError):
            engine.replay(trace)

    def test_forged_conclusion_is_rejected(self, engine):
        trace = engine.explain("S8", 2)
        trace.bound = 2
        with pytest.raises(SoundnessError):
            engine.replay(trace)

    def test_undeclared_instance_is_rejected(self, engine, fact_base):
        trace = engine.explain("S8", 2)
        stripped = parse_fact_text(
            "\n".join(f'axiom bound group={a.group} p={a.p} bound={a.bound} cite "{a.cite}"' for a in fact_base.bounds)
        )
        other = BoundEngine(stripped, CHARACTERISTICS)
        with pytest.raises(SoundnessError):
            other.replay(trace)


class TestRelate:

    def test_s7_and_s6_in_characteristic_five(self, engine):
        relation = engine.relate("S7", "S6", 5)
        assert relation.equal
        reasons = [s.reason for s in relation.forward]
        assert "hypersurface" in reasons
        assert relation.backward[0].reason == "subgroup-monotone"
        assert relation.render().startswith("rd_5(S7) = rd_5(S6)")

    def test_same_group(self, engine):
        relation = engine.relate("S6", "S6", 3)
        assert relation.equal
        assert "same group" in relation.render()

    def test_one_direction_only(self, engine):
        relation = engine.relate("S7", "S8", 0)
        assert not relation.equal
        assert relation.forward is not None
        assert relation.backward is None
        assert relation.to_dict()['backward'] is None


def test_small_fact_base_without_rules_beyond_axioms():
    base = parse_fact_text('axiom bound group=S5 p=0 bound=1 cite "Bring"')
    engine = BoundEngine(base, (0, 3))
    engine.derive()
    assert engine.bound("S5", 3) == 1
    assert engine.bound("A5", 0) == 1
    assert engine.explain("S5", 3).rules_used() == ["char-zero-dominates"]
