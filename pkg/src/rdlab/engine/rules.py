"""Inference rules over resolvent-degree upper bounds.

A rule proposes ``Derivation`` records from the current best bounds.
``conclude`` recomputes a conclusion from premise bounds and
``side_conditions`` re-checks the structural hypotheses, which is all a
replay needs.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Protocol, Sequence, Tuple

from sympy import primefactors

from ..checks.cone import cone_condition, is_prime_power_of
from ..utils.logging import get_logger
from .facts import ExtensionAxiom, FactBase, IsomorphismAxiom, RuleInstance, SubgroupAxiom
from .groups import GroupId, parse_group, symmetric

logger = get_logger(__name__)

Key = Tuple[str, int]


@dataclass(frozen=True)
class StructuralAxiom:
    """A cited non-bound premise: inclusion, extension, isomorphism or rule instance."""

    kind: str
    statement: str
    cite: str
    cert: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {'kind': self.kind, 'statement': self.statement, 'cite': self.cite, 'cert': list(self.cert)}


@dataclass(frozen=True)
class Derivation:
    """One rule application: ``rd_p(group) ≤ bound`` from ``premises``."""

    group: str
    p: int
    bound: int
    rule_id: str
    params: Tuple[Tuple[str, object], ...] = ()
    premises: Tuple[Key, ...] = ()
    structure: Tuple[StructuralAxiom, ...] = ()

    @property
    def key(self) -> Key:
        return (self.group, self.p)

    def param_dict(self) -> Dict[str, object]:
        return dict(self.params)


class KnowledgeState(Protocol):
    fact_base: FactBase
    characteristics: Tuple[int, ...]
    universe: Dict[str, GroupId]

    def bound(self, group: str, p: int) -> Optional[int]:
        ...


def _leaf(record, kind: str, statement: str) -> StructuralAxiom:
    return StructuralAxiom(kind, statement, record.cite or "", tuple(record.cert))


def subgroup_leaf(s: SubgroupAxiom) -> StructuralAxiom:
    return _leaf(s, "subgroup", f"{s.sub} ⊂ {s.group}")


def extension_leaf(e: ExtensionAxiom) -> StructuralAxiom:
    kind = "central extension" if e.central else "extension"
    return _leaf(e, kind, f"1 → {e.normal} → {e.group} → {e.quotient} → 1")


def isomorphism_leaf(i: IsomorphismAxiom) -> StructuralAxiom:
    return _leaf(i, "isomorphism", f"{i.left} ≅ {i.right}")


def instance_leaf(r: RuleInstance) -> StructuralAxiom:
    args = " ".join(f"{k}={v}" for k, v in sorted(r.params.items()))
    return _leaf(r, "rule-instance", f"{r.rule_id} {args}")


class Rule(ABC):
    """Base class for inference rules."""

    rule_id: str = ""
    anchor: str = ""

    @abstractmethod
    def candidates(self, kb: KnowledgeState) -> Iterator[Derivation]:
        """Derivations available from the current bounds."""

    @abstractmethod
    def conclude(self, params: Dict[str, object], premises: Sequence[int]) -> int:
        """Conclusion from premise bounds."""

    def side_conditions(self, params: Dict[str, object], fact_base: FactBase) -> Dict[str, bool]:
        return {}

    def derivation(self, group: str, p: int, params: Dict[str, object], premises: Sequence[Key], bounds: Sequence[int], structure=()) -> Derivation:
        return Derivation(
            group=group,
            p=p,
            bound=self.conclude(params, bounds),
            rule_id=self.rule_id,
            params=tuple(sorted(params.items())),
            premises=tuple(premises),
            structure=tuple(structure),
        )


def _known(kb: KnowledgeState, keys: Sequence[Key]) -> Optional[List[int]]:
    values = [kb.bound(g, p) for g, p in keys]
    return None if any(v is None for v in values) else values


# Structural rules ----------------------------------------------------------------


class TrivialGroupRule(Rule):
    rule_id = "trivial"
    anchor = "the trivial group has resolvent degree 0"

    def candidates(self, kb):
        for g in kb.universe.values():
            if g.trivial:
                for p in kb.characteristics:
                    yield self.derivation(g.name, p, {'group': g.name}, (), ())

    def conclude(self, params, premises):
        return 0

    def side_conditions(self, params, fact_base):
        return {'trivial': parse_group(str(params['group'])).trivial}


class AbelianRule(Rule):
    rule_id = "abelian"
    anchor = "abelian groups have resolvent degree at most 1"

    def candidates(self, kb):
        for g in kb.universe.values():
            if g.abelian and not g.trivial:
                for p in kb.characteristics:
                    yield self.derivation(g.name, p, {'group': g.name}, (), ())

    def conclude(self, params, premises):
        return 1

    def side_conditions(self, params, fact_base):
        return {'abelian': parse_group(str(params['group'])).abelian}


class SubgroupRule(Rule):
    rule_id = "subgroup-monotone"
    anchor = "rd(H) ≤ rd(G) for a subgroup H of G"

    def candidates(self, kb):
        for s in kb.fact_base.subgroups:
            for p in kb.characteristics:
                bounds = _known(kb, [(s.group, p)])
                if bounds is not None:
                    yield self.derivation(s.sub, p, {'sub': s.sub, 'group': s.group}, [(s.group, p)], bounds, [subgroup_leaf(s)])

    def conclude(self, params, premises):
        return premises[0]

    def side_conditions(self, params, fact_base):
        declared = any(s.sub == params['sub'] and s.group == params['group'] for s in fact_base.subgroups)
        return {'inclusion declared': declared}


def _find_extension(fact_base: FactBase, group: str) -> Optional[ExtensionAxiom]:
    return next((e for e in fact_base.extensions if e.group == group), None)


class ExtensionMaxRule(Rule):
    rule_id = "extension-max"
    anchor = "rd(G) ≤ max(rd(A), rd(B)) for an extension 1 → A → G → B → 1"

    def candidates(self, kb):
        for e in kb.fact_base.extensions:
            for p in kb.characteristics:
                keys = [(e.normal, p), (e.quotient, p)]
                bounds = _known(kb, keys)
                if bounds is not None:
                    yield self.derivation(e.group, p, {'group': e.group}, keys, bounds, [extension_leaf(e)])

    def conclude(self, params, premises):
        return max(premises)

    def side_conditions(self, params, fact_base):
        return {'extension declared': _find_extension(fact_base, str(params['group'])) is not None}


class CentralQuotientRule(Rule):
    """Equality rd(G) = rd(B) for a central extension by A with B ≠ 1 and p ∤ |A|.

    Both inequalities are separate derivations, ``direction`` tells which.
    """

    rule_id = "central-quotient"
    anchor = "rd(G) = rd(B) for a central extension 1 → A → G → B → 1 with B ≠ 1 and p ∤ |A|"

    @staticmethod
    def applies(e: ExtensionAxiom, p: int) -> Dict[str, bool]:
        order = parse_group(e.normal).order
        return {
            'A central': e.central,
            'B nontrivial': not parse_group(e.quotient).trivial,
            'p does not divide |A|': p == 0 or (order is not None and order % p != 0),
        }

    def candidates(self, kb):
        for e in kb.fact_base.extensions:
            for p in kb.characteristics:
                if not all(self.applies(e, p).values()):
                    continue
                for direction, target, source in (("up", e.group, e.quotient), ("down", e.quotient, e.group)):
                    bounds = _known(kb, [(source, p)])
                    if bounds is not None:
                        params = {'group': e.group, 'p': p, 'direction': direction}
                        yield self.derivation(target, p, params, [(source, p)], bounds, [extension_leaf(e)])

    def conclude(self, params, premises):
        return premises[0]

    def side_conditions(self, params, fact_base):
        e = _find_extension(fact_base, str(params['group']))
        if e is None:
            return {'extension declared': False}
        return {'extension declared': True, **self.applies(e, int(params['p']))}


class AlternatingSymmetricRule(Rule):
    rule_id = "alternating-symmetric"
    anchor = "rd(A_n) = rd(S_n) for n ≥ 3"

    def candidates(self, kb):
        for g in list(kb.universe.values()):
            if g.family != "symmetric" or g.params[0] < 3:
                continue
            n = g.params[0]
            pairs = (("S-from-A", f"S{n}", f"A{n}"), ("A-from-S", f"A{n}", f"S{n}"))
            for p in kb.characteristics:
                for direction, target, source in pairs:
                    bounds = _known(kb, [(source, p)])
                    if bounds is not None:
                        yield self.derivation(target, p, {'n': n, 'direction': direction}, [(source, p)], bounds)

    def conclude(self, params, premises):
        return premises[0]

    def side_conditions(self, params, fact_base):
        return {'n ≥ 3': int(params['n']) >= 3}


class IsomorphismRule(Rule):
    rule_id = "isomorphism"
    anchor = "isomorphic groups have equal resolvent degree"

    def candidates(self, kb):
        for i in kb.fact_base.isomorphisms:
            for p in kb.characteristics:
                for target, source in ((i.left, i.right), (i.right, i.left)):
                    bounds = _known(kb, [(source, p)])
                    if bounds is not None:
                        params = {'left': i.left, 'right': i.right}
                        yield self.derivation(target, p, params, [(source, p)], bounds, [isomorphism_leaf(i)])

    def conclude(self, params, premises):
        return premises[0]

    def side_conditions(self, params, fact_base):
        declared = any(i.left == params['left'] and i.right == params['right'] for i in fact_base.isomorphisms)
        return {'isomorphism declared': declared}


class CharacteristicZeroRule(Rule):
    rule_id = "char-zero-dominates"
    anchor = "rd_p(G) ≤ rd_0(G) for every p > 0"

    def candidates(self, kb):
        for g in kb.universe.values():
            bounds = _known(kb, [(g.name, 0)])
            if bounds is None:
                continue
            for p in kb.characteristics:
                if p > 0:
                    yield self.derivation(g.name, p, {'p': p}, [(g.name, 0)], bounds)

    def conclude(self, params, premises):
        return premises[0]

    def side_conditions(self, params, fact_base):
        return {'p > 0': int(params['p']) > 0}


# Geometric schemas ------------------------------------------------------------------


class InvariantVarietyRule(Rule):
    """rd_p(G) ≤ max(b, rd_p(S_a)) when G acts faithfully on a variety of dimension b and degree a."""

    rule_id = "invariant-variety"
    anchor = "a faithful action on an a-fold cover of a b-dimensional base bounds rd(G) by max(b, rd(S_a))"

    def instances(self, fact_base: FactBase) -> Iterator[Tuple[RuleInstance, str, int, int, int]]:
        for r in fact_base.instances:
            if r.rule_id == self.rule_id:
                yield r, r.params['group'], r.integer('p'), r.integer('a'), r.integer('b')

    def candidates(self, kb):
        for r, group, p, a, b in self.instances(kb.fact_base):
            if p not in kb.characteristics:
                continue
            bounds = _known(kb, [(symmetric(a).name, p)])
            if bounds is not None:
                params = {'group': group, 'p': p, 'a': a, 'b': b}
                yield self.derivation(group, p, params, [(symmetric(a).name, p)], bounds, [instance_leaf(r)])

    def conclude(self, params, premises):
        return max(int(params['b']), premises[0])

    def side_conditions(self, params, fact_base):
        declared = any(
            (group, p, a, b) == (params['group'], params['p'], params['a'], params['b'])
            for _, group, p, a, b in self.instances(fact_base)
        )
        return {'instance declared': declared, 'b ≥ 0': int(params['b']) >= 0}


class HypersurfaceRule(Rule):
    """rd_p(G) ≤ max(n − 2, rd_p(S_{q+1})) for G = Sp(n,q), U(n,q) or SU(n,q).

    G preserves a smooth hypersurface of degree q + 1 in P^{n-1}.
    """

    rule_id = "hypersurface"
    anchor = "a classical group preserving a smooth hypersurface of degree q + 1 in P^{n-1}"
    families = ("Sp", "U", "SU")

    def candidates(self, kb):
        for r in kb.fact_base.instances:
            if r.rule_id != self.rule_id:
                continue
            family, n, q = r.params['family'], r.integer('n'), r.integer('q')
            group = parse_group(f"{family}({n},{q})").name
            p = primefactors(q)[0]
            if p not in kb.characteristics:
                continue
            cover = symmetric(q + 1).name
            bounds = _known(kb, [(cover, p)])
            if bounds is not None:
                params = {'family': family, 'n': n, 'q': q}
                yield self.derivation(group, p, params, [(cover, p)], bounds, [instance_leaf(r)])

    def conclude(self, params, premises):
        return max(int(params['n']) - 2, premises[0])

    def side_conditions(self, params, fact_base):
        family, n, q = params['family'], int(params['n']), int(params['q'])
        declared = any(
            r.rule_id == self.rule_id and (r.params['family'], r.integer('n'), r.integer('q')) == (family, n, q)
            for r in fact_base.instances
        )
        return {
            'instance declared': declared,
            'family preserves a form': family in self.families,
            'symplectic dimension even': family != "Sp" or n % 2 == 0,
            'n ≥ 3': n >= 3,
        }


class ConeBaseRule(Rule):
    """rd_p(S_n) ≤ max(n − 5, rd_p(S_6)) for n = p^r ≥ 7 with C(n, 1..3) ≡ 0 mod p.

    S_n acts on the degree-6 variety Z123 of dimension n − 5.
    """

    rule_id = "cone-base"
    anchor = "S_n acting on the degree-6 quotient of the cone Y123 over its vertex"

    def candidates(self, kb):
        for r in kb.fact_base.instances:
            if r.rule_id != self.rule_id:
                continue
            n, p = r.integer('n'), r.integer('p')
            if p not in kb.characteristics:
                continue
            bounds = _known(kb, [(symmetric(6).name, p)])
            if bounds is not None:
                yield self.derivation(symmetric(n).name, p, {'n': n, 'p': p}, [(symmetric(6).name, p)], bounds, [instance_leaf(r)])

    def conclude(self, params, premises):
        return max(int(params['n']) - 5, premises[0])

    def side_conditions(self, params, fact_base):
        n, p = int(params['n']), int(params['p'])
        declared = any(
            r.rule_id == self.rule_id and (r.integer('n'), r.integer('p')) == (n, p)
            for r in fact_base.instances
        )
        return {
            'instance declared': declared,
            'n is a power of p': p > 1 and is_prime_power_of(n, p),
            'n ≥ 7': n >= 7,
            'C(n, 1..3) ≡ 0 mod p': p > 1 and cone_condition(n, p),
        }


DEFAULT_RULES: Tuple[Rule, ...] = (
    TrivialGroupRule(),
    AbelianRule(),
    CharacteristicZeroRule(),
    SubgroupRule(),
    ExtensionMaxRule(),
    CentralQuotientRule(),
    AlternatingSymmetricRule(),
    IsomorphismRule(),
    InvariantVarietyRule(),
    HypersurfaceRule(),
    ConeBaseRule(),
)

RULES: Dict[str, Rule] = {rule.rule_id: rule for rule in DEFAULT_RULES}


def schema_groups(fact_base: FactBase) -> List[GroupId]:
    """Symmetric groups the geometric schemas consult."""
    names = {symmetric(6).name}
    for r in fact_base.instances:
        if r.rule_id == "invariant-variety":
            names.add(symmetric(r.integer('a')).name)
        elif r.rule_id == "hypersurface":
            names.add(symmetric(r.integer('q') + 1).name)
            names.add(parse_group(f"{r.params['family']}({r.params['n']},{r.params['q']})").name)
        elif r.rule_id == "cone-base":
            names.add(symmetric(r.integer('n')).name)
    return [parse_group(n) for n in sorted(names)]
