"""Forward-chaining derivation of resolvent-degree upper bounds."""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..core.config import get_config
from ..utils.errors import AbsentFactError, SoundnessError, UnderivableCellError
from ..utils.logging import get_logger
from .facts import BoundAxiom, FactBase, load_fact_base
from .groups import GroupId, parse_group
from .rules import (
    DEFAULT_RULES,
    RULES,
    CentralQuotientRule,
    Derivation,
    Key,
    Rule,
    StructuralAxiom,
    schema_groups,
)

logger = get_logger(__name__)

AXIOM = "axiom"
MAX_ROUNDS = 1000


@dataclass
class DerivationTrace:
    """Proof tree of one bound; leaves are cited axioms."""

    group: str
    p: int
    bound: int
    rule_id: str
    anchor: str
    params: Dict[str, object] = field(default_factory=dict)
    premises: List["DerivationTrace"] = field(default_factory=list)
    structure: List[StructuralAxiom] = field(default_factory=list)

    @property
    def claim(self) -> str:
        return f"rd_{self.p}({self.group}) ≤ {self.bound}"

    def leaves(self) -> List[str]:
        """Citations of every axiom the trace rests on, in tree order."""
        found = [self.anchor] if self.rule_id == AXIOM else []
        found += [s.cite for s in self.structure]
        for child in self.premises:
            found += child.leaves()
        return found

    def rules_used(self) -> List[str]:
        used = [] if self.rule_id == AXIOM else [self.rule_id]
        for child in self.premises:
            used += [r for r in child.rules_used() if r not in used]
        return used

    def render(self, indent: str = "") -> str:
        label = f"[axiom: {self.anchor}]" if self.rule_id == AXIOM else f"[{self.rule_id}: {self.anchor}]"
        lines = [f"{indent}{self.claim}  {label}"]
        for s in self.structure:
            cert = f" cert={','.join(s.cert)}" if s.cert else ""
            lines.append(f"{indent}  · {s.statement}  [{s.kind}: {s.cite}]{cert}")
        for child in self.premises:
            lines.append(child.render(indent + "  "))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            'group': self.group,
            'p': self.p,
            'bound': self.bound,
            'rule': self.rule_id,
            'anchor': self.anchor,
            'params': {k: v for k, v in self.params.items()},
            'structure': [s.to_dict() for s in self.structure],
            'premises': [c.to_dict() for c in self.premises],
        }


@dataclass(frozen=True)
class BoundFact:
    group: GroupId
    p: int
    bound: int
    derivation: Derivation


@dataclass
class RelationStep:
    lower: str
    upper: str
    reason: str


@dataclass
class Relation:
    """Symbolic comparison of rd_p(g) and rd_p(h) through chains of inequalities."""

    g: str
    h: str
    p: int
    forward: Optional[List[RelationStep]]
    backward: Optional[List[RelationStep]]

    @property
    def equal(self) -> bool:
        return self.forward is not None and self.backward is not None

    def render(self) -> str:
        def chain(steps: Optional[List[RelationStep]], a: str, b: str) -> str:
            if steps is None:
                return f"rd_{self.p}({a}) ≤ rd_{self.p}({b}): not traceable"
            if not steps:
                return f"rd_{self.p}({a}) ≤ rd_{self.p}({b}): same group"
            body = " ≤ ".join([f"rd_{self.p}({steps[0].lower})"] + [f"rd_{self.p}({s.upper})" for s in steps])
            return f"{body}  via {', '.join(s.reason for s in steps)}"

        head = f"rd_{self.p}({self.g}) = rd_{self.p}({self.h})" if self.equal else "no equality"
        return "\n".join([head, chain(self.forward, self.g, self.h), chain(self.backward, self.h, self.g)])

    def to_dict(self) -> dict:
        def steps(s):
            return None if s is None else [vars(x) for x in s]
        return {'g': self.g, 'h': self.h, 'p': self.p, 'equal': self.equal, 'forward': steps(self.forward), 'backward': steps(self.backward)}


@dataclass
class BoundTable:
    groups: List[str]
    characteristics: List[int]
    cells: Dict[Key, int]
    missing: List[Key] = field(default_factory=list)

    def row(self, group: str) -> List[Optional[int]]:
        return [self.cells.get((group, p)) for p in self.characteristics]

    def to_records(self) -> List[dict]:
        return [
            {'group': g, 'p': p, 'bound': self.cells.get((g, p))}
            for g in self.groups
            for p in self.characteristics
        ]

    def to_text(self) -> str:
        width = max(len(g) for g in self.groups) + 2
        header = "G".ljust(width) + "".join(f"p={p}".rjust(6) for p in self.characteristics)
        lines = [header, "-" * len(header)]
        for g in self.groups:
            cells = "".join(("-" if v is None else str(v)).rjust(6) for v in self.row(g))
            lines.append(g.ljust(width) + cells)
        return "\n".join(lines)


class BoundEngine:
    """Forward chaining to fixpoint over a fact base.

    A bound is replaced only by a strictly smaller one, so derivation
    terminates and every stored derivation rests on earlier facts.
    """

    def __init__(
        self,
        fact_base: Optional[FactBase] = None,
        characteristics: Optional[Sequence[int]] = None,
        rules: Sequence[Rule] = DEFAULT_RULES,
    ):
        config = get_config().engine
        self.fact_base = fact_base if fact_base is not None else load_fact_base(config.fact_base)
        self.characteristics: Tuple[int, ...] = tuple(characteristics or config.characteristics)
        self.rules = tuple(rules)
        self.universe: Dict[str, GroupId] = {}
        self._facts: Dict[Key, BoundFact] = {}
        self.rounds = 0
        self._derived = False
        self._build_universe(config.table_groups)

    def _build_universe(self, extra: Iterable[str]) -> None:
        groups = self.fact_base.groups() + schema_groups(self.fact_base) + [parse_group(g) for g in extra]
        for g in groups:
            self.universe[g.name] = g
            for component in g.components:
                self.universe.setdefault(component.name, component)
        for g in list(self.universe.values()):
            if g.family in ("symmetric", "alternating") and g.params[0] >= 3:
                n = g.params[0]
                self.universe.setdefault(f"S{n}", parse_group(f"S{n}"))
                self.universe.setdefault(f"A{n}", parse_group(f"A{n}"))

    # Fact store

    def bound(self, group: str, p: int) -> Optional[int]:
        fact = self._facts.get((parse_group(group).name, p))
        return fact.bound if fact else None

    def _floor(self, group: str, value: int) -> int:
        return value if parse_group(group).trivial else max(value, 1)

    def _offer(self, d: Derivation) -> bool:
        if d.p not in self.characteristics:
            return False
        bound = self._floor(d.group, d.bound)
        current = self._facts.get(d.key)
        if current is not None and current.bound <= bound:
            return False
        if bound != d.bound:
            d = Derivation(d.group, d.p, bound, d.rule_id, d.params, d.premises, d.structure)
        self._facts[d.key] = BoundFact(parse_group(d.group), d.p, bound, d)
        return True

    def _axiom_derivation(self, a: BoundAxiom) -> Derivation:
        return Derivation(a.group, a.p, a.bound, AXIOM, (('cite', a.cite),))

    def derive(self) -> Dict[Key, BoundFact]:
        """Chain to fixpoint; returns the best fact per (group, p)."""
        self._facts.clear()
        for a in self.fact_base.bounds:
            self._offer(self._axiom_derivation(a))
        self.rounds = 0
        changed = True
        while changed:
            self.rounds += 1
            if self.rounds > MAX_ROUNDS:
                raise SoundnessError("derivation did not reach a fixpoint")
            changed = False
            for rule in self.rules:
                for d in list(rule.candidates(self)):
                    changed |= self._offer(d)
        self._derived = True
        logger.info(f"Derived {len(self._facts)} bounds in {self.rounds} rounds")
        return dict(self._facts)

    def _ensure_derived(self) -> None:
        if not self._derived:
            self.derive()

    def facts(self) -> List[BoundFact]:
        self._ensure_derived()
        return [self._facts[k] for k in sorted(self._facts)]

    def fact(self, group: str, p: int) -> BoundFact:
        self._ensure_derived()
        key = (parse_group(group).name, p)
        if key not in self._facts:
            raise AbsentFactError(f"No bound derived for rd_{p}({key[0]})", details={'group': key[0], 'p': p})
        return self._facts[key]

    # Queries

    def trace(self, group: str, p: int) -> DerivationTrace:
        return self._trace(self.fact(group, p).derivation, set())

    def _trace(self, d: Derivation, active: set) -> DerivationTrace:
        if d.key in active:
            raise SoundnessError(f"cyclic derivation at rd_{d.p}({d.group})")
        if d.rule_id == AXIOM:
            return DerivationTrace(d.group, d.p, d.bound, AXIOM, str(d.param_dict()['cite']), d.param_dict())
        active = active | {d.key}
        premises = [self._trace(self._facts[k].derivation, active) for k in d.premises]
        rule = RULES[d.rule_id]
        return DerivationTrace(d.group, d.p, d.bound, d.rule_id, rule.anchor, d.param_dict(), premises, list(d.structure))

    def explain(self, group: str, p: int) -> DerivationTrace:
        """Derivation tree of the best bound for rd_p(group)."""
        return self.trace(group, p)

    def table(
        self,
        groups: Optional[Sequence[str]] = None,
        characteristics: Optional[Sequence[int]] = None,
        strict: bool = True,
    ) -> BoundTable:
        """Best derived bounds; missing cells raise unless ``strict`` is off."""
        self._ensure_derived()
        names = [parse_group(g).name for g in (groups or get_config().engine.table_groups)]
        chars = list(characteristics or self.characteristics)
        cells, missing = {}, []
        for g in names:
            for p in chars:
                value = self.bound(g, p)
                if value is None:
                    missing.append((g, p))
                else:
                    cells[(g, p)] = value
        table = BoundTable(names, chars, cells, missing)
        if missing and strict:
            raise UnderivableCellError(
                f"{len(missing)} cells have no derivation: " + ", ".join(f"rd_{p}({g})" for g, p in missing),
                cells=missing,
            )
        return table

    def replay(self, trace: DerivationTrace) -> int:
        """Re-check a trace bottom-up; returns the bound it certifies."""
        if trace.rule_id == AXIOM:
            if not trace.anchor:
                raise SoundnessError(f"uncited axiom for {trace.claim}")
            declared = [
                a.bound for a in self.fact_base.bounds
                if a.group == trace.group and a.p == trace.p and a.cite == trace.anchor
            ]
            if not declared or min(declared) > trace.bound:
                raise SoundnessError(f"{trace.claim} is not a declared axiom")
            return trace.bound
        rule = RULES.get(trace.rule_id)
        if rule is None:
            raise SoundnessError(f"unknown rule {trace.rule_id}")
        for s in trace.structure:
            if not s.cite and s.kind != "rule-instance":
                raise SoundnessError(f"uncited premise {s.statement}")
        failed = [name for name, ok in rule.side_conditions(trace.params, self.fact_base).items() if not ok]
        if failed:
            raise SoundnessError(f"{trace.claim}: side conditions fail: {', '.join(failed)}")
        premises = [self.replay(child) for child in trace.premises]
        recomputed = self._floor(trace.group, rule.conclude(trace.params, premises))
        if recomputed > trace.bound:
            raise SoundnessError(f"{trace.claim} does not follow: premises give {recomputed}")
        return recomputed

    def replay_all(self) -> int:
        """Replay every derived fact; returns how many were checked."""
        facts = self.facts()
        for f in facts:
            self.replay(self.trace(f.group.name, f.p))
        return len(facts)

    # Symbolic comparison

    def _edges(self, p: int) -> Dict[str, List[Tuple[str, str]]]:
        """lower → [(upper, reason)] meaning rd_p(lower) ≤ rd_p(upper)."""
        edges: Dict[str, List[Tuple[str, str]]] = {}

        def add(lower: str, upper: str, reason: str) -> None:
            edges.setdefault(lower, []).append((upper, reason))

        def at_most_one(name: str) -> bool:
            value = self.bound(name, p)
            return value is not None and value <= 1

        def nontrivial(name: str) -> bool:
            return not parse_group(name).trivial

        fb = self.fact_base
        for s in fb.subgroups:
            add(s.sub, s.group, "subgroup-monotone")
        for i in fb.isomorphisms:
            add(i.left, i.right, "isomorphism")
            add(i.right, i.left, "isomorphism")
        for e in fb.extensions:
            if all(CentralQuotientRule.applies(e, p).values()):
                add(e.group, e.quotient, "central-quotient")
                add(e.quotient, e.group, "central-quotient")
            if at_most_one(e.quotient) and nontrivial(e.normal):
                add(e.group, e.normal, "extension-max")
            if at_most_one(e.normal) and nontrivial(e.quotient):
                add(e.group, e.quotient, "extension-max")
        for g in self.universe.values():
            if g.family == "symmetric" and g.params[0] >= 3:
                n = g.params[0]
                add(f"S{n}", f"A{n}", "alternating-symmetric")
                add(f"A{n}", f"S{n}", "alternating-symmetric")
        for r in fb.instances:
            if r.rule_id == "hypersurface" and r.integer('n') - 2 <= 1:
                q = r.integer('q')
                if p and q % p == 0:
                    group = parse_group(f"{r.params['family']}({r.params['n']},{q})").name
                    add(group, f"S{q + 1}", "hypersurface")
            elif r.rule_id == "invariant-variety" and r.integer('p') == p and r.integer('b') <= 1:
                if nontrivial(f"S{r.integer('a')}"):
                    add(r.params['group'], f"S{r.integer('a')}", "invariant-variety")
        return edges

    def _chain(self, g: str, h: str, p: int) -> Optional[List[RelationStep]]:
        edges = self._edges(p)
        parent: Dict[str, Tuple[str, str]] = {}
        queue = deque([g])
        seen = {g}
        while queue:
            node = queue.popleft()
            if node == h:
                steps = []
                while node != g:
                    prev, reason = parent[node]
                    steps.append(RelationStep(prev, node, reason))
                    node = prev
                return steps[::-1]
            for nxt, reason in edges.get(node, []):
                if nxt not in seen:
                    seen.add(nxt)
                    parent[nxt] = (node, reason)
                    queue.append(nxt)
        return None

    def relate(self, g: str, h: str, p: int) -> Relation:
        """Search both inequalities between rd_p(g) and rd_p(h).

        Schema edges rd(G) ≤ max(b, rd(S_a)) count as rd(G) ≤ rd(S_a) when
        b ≤ 1, since nontrivial groups have rd ≥ 1.
        """
        self._ensure_derived()
        g, h = parse_group(g).name, parse_group(h).name
        if g == h:
            return Relation(g, h, p, [], [])
        return Relation(g, h, p, self._chain(g, h, p), self._chain(h, g, p))
