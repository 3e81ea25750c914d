"""Tests for individual inference rules."""

import pytest

from rdlab.engine.facts import parse_fact_text
from rdlab.engine.rules import (
    RULES,
    CentralQuotientRule,
    ConeBaseRule,
    HypersurfaceRule,
    InvariantVarietyRule,
    schema_groups,
)

FACTS = """
axiom extension group=2.A7 normal=Z2 quotient=A7 central=yes cite "double cover"
axiom extension group=W(E6) normal=SU(4,2) quotient=Z2 central=no cite "ATLAS"
rule-instance hypersurface family=U n=4 q=3 cite "hermitian surface"
rule-instance cone-base n=8 p=2 cite "S8 on Z123"
rule-instance invariant-variety group=PSL(2,9) p=3 a=1 b=1 cite "P^1 over F_9"
"""


@pytest.fixture
def facts():
    return parse_fact_text(FACTS)


def test_registry_of_rules():
    assert set(RULES) == {
        "trivial", "abelian", "char-zero-dominates", "subgroup-monotone", "extension-max",
        "central-quotient", "alternating-symmetric", "isomorphism", "invariant-variety",
        "hypersurface", "cone-base",
    }
    assert all(rule.anchor for rule in RULES.values())


class TestCentralQuotient:

    def test_applies_when_p_is_coprime(self, facts):
        conditions = CentralQuotientRule.applies(facts.extensions[0], 3)
        assert all(conditions.values())

    def test_blocked_when_p_divides_the_kernel(self, facts):
        conditions = CentralQuotientRule.applies(facts.extensions[0], 2)
        assert conditions['p does not divide |A|'] is False

    def test_blocked_for_non_central_extensions(self, facts):
        conditions = CentralQuotientRule.applies(facts.extensions[1], 5)
        assert conditions['A central'] is False

    def test_characteristic_zero(self, facts):
        assert all(CentralQuotientRule.applies(facts.extensions[0], 0).values())


class TestGeometricSchemas:

    def test_hypersurface_conclusion(self):
        rule = HypersurfaceRule()
        assert rule.conclude({'family': "U", 'n': 4, 'q': 3}, [1]) == 2
        assert rule.conclude({'family': "U", 'n': 3, 'q': 5}, [2]) == 2

    def test_hypersurface_side_conditions(self, facts):
        rule = HypersurfaceRule()
        assert all(rule.side_conditions({'family': "U", 'n': 4, 'q': 3}, facts).values())
        conditions = rule.side_conditions({'family': "Sp", 'n': 3, 'q': 3}, facts)
        assert not conditions['instance declared']
        assert not conditions['symplectic dimension even']

    def test_cone_base(self, facts):
        rule = ConeBaseRule()
        assert rule.conclude({'n': 8, 'p': 2}, [2]) == 3
        assert all(rule.side_conditions({'n': 8, 'p': 2}, facts).values())
        conditions = rule.side_conditions({'n': 6, 'p': 2}, facts)
        assert not conditions['n is a power of p']
        assert not conditions['C(n, 1..3) ≡ 0 mod p']

    def test_invariant_variety(self, facts):
        rule = InvariantVarietyRule()
        assert rule.conclude({'group': "PSL(2,9)", 'p': 3, 'a': 1, 'b': 1}, [0]) == 1
        assert rule.side_conditions({'group': "PSL(2,9)", 'p': 3, 'a': 1, 'b': 1}, facts)['instance declared']
        assert not rule.side_conditions({'group': "PSL(2,9)", 'p': 5, 'a': 1, 'b': 1}, facts)['instance declared']

    def test_schema_groups(self, facts):
        names = [g.name for g in schema_groups(facts)]
        assert names == sorted(names)
        assert {"S1", "S4", "S6", "S8", "U(4,3)"} <= set(names)
