"""Declarative fact base: cited axioms and certified rule instances.

One record per line, ``#`` starts a comment::

    axiom bound group=S6 p=0 bound=2 cite "..."
    axiom subgroup sub=2.A7 group=U(4,3) cite "..."
    axiom extension group=2.A7 normal=Z2 quotient=A7 central=yes cite "..."
    axiom isomorphism left=A6 right=PSL(2,9) cert=sec2.3.psl2-9 cite "..."
    rule-instance hypersurface family=U n=4 q=3 cert=prop3.1b.unit-invariance cite "..."

Every axiom must carry a citation. Certificates name registered check ids.
"""

import shlex
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Set, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..utils.errors import FactBaseError, LabError, UnknownGroupError
from ..utils.logging import get_logger
from .groups import GroupId, parse_group

logger = get_logger(__name__)

RULE_PARAMETERS: Dict[str, Set[str]] = {
    'invariant-variety': {'group', 'a', 'b', 'p'},
    'hypersurface': {'family', 'n', 'q'},
    'cone-base': {'n', 'p'},
}


def _canonical(name: str) -> str:
    try:
        return parse_group(name).name
    except UnknownGroupError as exc:
        raise ValueError(exc.message) from exc


def _certificates(value) -> List[str]:
    if value is None:
        return []
    if isinstance(value, str):
        return [v for v in value.split(",") if v]
    return list(value)


class _Record(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    line: int = 0
    cert: List[str] = Field(default_factory=list)

    @field_validator("cert", mode="before")
    @classmethod
    def split_certificates(cls, v):
        return _certificates(v)


class _Axiom(_Record):
    cite: str = Field(min_length=1)


class BoundAxiom(_Axiom):
    """rd_p(group) ≤ bound."""

    group: str
    p: int = Field(ge=0)
    bound: int = Field(ge=0)

    @field_validator("group")
    @classmethod
    def canonical_group(cls, v: str) -> str:
        return _canonical(v)


class SubgroupAxiom(_Axiom):
    sub: str
    group: str

    @field_validator("sub", "group")
    @classmethod
    def canonical_groups(cls, v: str) -> str:
        return _canonical(v)


class ExtensionAxiom(_Axiom):
    """1 → normal → group → quotient → 1."""

    group: str
    normal: str
    quotient: str
    central: bool = False

    @field_validator("group", "normal", "quotient")
    @classmethod
    def canonical_groups(cls, v: str) -> str:
        return _canonical(v)

    @field_validator("central", mode="before")
    @classmethod
    def parse_yes_no(cls, v):
        if isinstance(v, str):
            if v.lower() not in ("yes", "no", "true", "false"):
                raise ValueError("central must be yes or no")
            return v.lower() in ("yes", "true")
        return v


class IsomorphismAxiom(_Axiom):
    left: str
    right: str

    @field_validator("left", "right")
    @classmethod
    def canonical_groups(cls, v: str) -> str:
        return _canonical(v)


class RuleInstance(_Record):
    """Geometric premise of a rule schema, certified by lab checks."""

    rule_id: str
    params: Dict[str, str]
    cite: Optional[str] = None

    @model_validator(mode="after")
    def parameters_match_rule(self):
        expected = RULE_PARAMETERS.get(self.rule_id)
        if expected is None:
            raise ValueError(f"unknown rule {self.rule_id!r}")
        if set(self.params) != expected:
            raise ValueError(f"{self.rule_id} takes {sorted(expected)}, got {sorted(self.params)}")
        if 'group' in self.params:
            self.params['group'] = _canonical(self.params['group'])
        for key in self.params.keys() - {'group', 'family'}:
            if not self.params[key].isdigit():
                raise ValueError(f"{key} must be a non-negative integer")
        return self

    def integer(self, key: str) -> int:
        return int(self.params[key])


AXIOM_KINDS = {
    'bound': BoundAxiom,
    'subgroup': SubgroupAxiom,
    'extension': ExtensionAxiom,
    'isomorphism': IsomorphismAxiom,
}


@dataclass
class FactBase:
    """Parsed fact base."""

    bounds: List[BoundAxiom] = field(default_factory=list)
    subgroups: List[SubgroupAxiom] = field(default_factory=list)
    extensions: List[ExtensionAxiom] = field(default_factory=list)
    isomorphisms: List[IsomorphismAxiom] = field(default_factory=list)
    instances: List[RuleInstance] = field(default_factory=list)
    origin: str = "<text>"

    @property
    def axiom_count(self) -> int:
        return len(self.bounds) + len(self.subgroups) + len(self.extensions) + len(self.isomorphisms)

    def group_names(self) -> Set[str]:
        names: Set[str] = set()
        names.update(a.group for a in self.bounds)
        for s in self.subgroups:
            names.update((s.sub, s.group))
        for e in self.extensions:
            names.update((e.group, e.normal, e.quotient))
        for i in self.isomorphisms:
            names.update((i.left, i.right))
        for r in self.instances:
            if 'group' in r.params:
                names.add(r.params['group'])
        return names

    def groups(self) -> List[GroupId]:
        return [parse_group(name) for name in sorted(self.group_names())]

    def certificates(self) -> Set[str]:
        records: Iterable[_Record] = [*self.subgroups, *self.extensions, *self.isomorphisms, *self.instances]
        return {c for r in records for c in r.cert}

    def add(self, record: _Record) -> None:
        target = {
            BoundAxiom: self.bounds,
            SubgroupAxiom: self.subgroups,
            ExtensionAxiom: self.extensions,
            IsomorphismAxiom: self.isomorphisms,
            RuleInstance: self.instances,
        }[type(record)]
        target.append(record)


def _parse_line(tokens: List[str], line: int) -> _Record:
    head, rest = tokens[0], tokens[1:]
    if head == "axiom":
        if not rest or rest[0] not in AXIOM_KINDS:
            raise FactBaseError(f"line {line}: unknown axiom kind", line=line)
        model, rest = AXIOM_KINDS[rest[0]], rest[1:]
    elif head == "rule-instance":
        if not rest:
            raise FactBaseError(f"line {line}: rule-instance needs a rule id", line=line)
        model, rule_id, rest = RuleInstance, rest[0], rest[1:]
    else:
        raise FactBaseError(f"line {line}: expected 'axiom' or 'rule-instance', got {head!r}", line=line)

    values: Dict[str, str] = {}
    k = 0
    while k < len(rest):
        token = rest[k]
        if token == "cite":
            if k + 1 >= len(rest):
                raise FactBaseError(f"line {line}: cite needs a quoted anchor", line=line)
            values['cite'] = rest[k + 1]
            k += 2
            continue
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise FactBaseError(f"line {line}: expected key=value, got {token!r}", line=line)
        if key in values:
            raise FactBaseError(f"line {line}: duplicate key {key!r}", line=line)
        values[key] = value
        k += 1

    try:
        if model is RuleInstance:
            cert = values.pop('cert', None)
            cite = values.pop('cite', None)
            return RuleInstance(rule_id=rule_id, params=values, cert=cert, cite=cite, line=line)
        return model(line=line, **values)
    except ValidationError as exc:
        problems = "; ".join(f"{'.'.join(map(str, e['loc'])) or 'record'}: {e['msg']}" for e in exc.errors())
        raise FactBaseError(f"line {line}: {problems}", line=line) from exc


def parse_fact_text(text: str, origin: str = "<text>", known_checks: Optional[Iterable[str]] = None) -> FactBase:
    """Parse fact-base text; certificates are validated when ``known_checks`` is given."""
    base = FactBase(origin=origin)
    for number, raw in enumerate(text.splitlines(), start=1):
        try:
            tokens = shlex.split(raw, comments=True)
        except ValueError as exc:
            raise FactBaseError(f"line {number}: {exc}", line=number) from exc
        if not tokens:
            continue
        base.add(_parse_line(tokens, number))

    if known_checks is not None:
        unknown = sorted(base.certificates() - set(known_checks))
        if unknown:
            raise FactBaseError(f"certificates name unregistered checks: {', '.join(unknown)}", unknown=unknown)
    logger.debug(f"Loaded {base.axiom_count} axioms and {len(base.instances)} rule instances from {origin}")
    return base


def default_fact_text() -> str:
    return resources.files("rdlab.engine").joinpath("data/default.facts").read_text(encoding="utf-8")


def load_fact_base(
    source: Union[Path, str, None] = None,
    known_checks: Optional[Iterable[str]] = None,
) -> FactBase:
    """Load a fact base from a file path, literal text or the embedded default.

    Certificates are checked against the check registry unless
    ``known_checks`` is supplied.
    """
    if known_checks is None:
        from ..checks.registry import default_registry

        known_checks = default_registry().ids(include_negative=True, include_heavy=True)
    if source is None:
        return parse_fact_text(default_fact_text(), "default.facts", known_checks)
    if isinstance(source, Path):
        try:
            text = source.read_text(encoding="utf-8")
        except OSError as exc:
            raise LabError(f"Cannot read fact base {source}: {exc}") from exc
        return parse_fact_text(text, str(source), known_checks)
    return parse_fact_text(source, "<text>", known_checks)
