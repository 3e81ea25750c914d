"""Projective spaces over finite fields, variety point sets and linear slicing.

Enumeration works on chunks of normalized points held in galois arrays: the
points of P^{n-1} with leading coordinate at index k are a 1 followed by
every tail in F^{n-1-k}, and each chunk is a contiguous block of tails in
base-q order. Filtering a chunk against a system is one vectorized
evaluation per member.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from ..core.config import get_config
from ..utils.errors import (
    BudgetExceededError,
    DegenerateSliceError,
    FieldMismatchError,
    SliceError,
    ValidationError,
)
from ..utils.logging import get_logger
from .gf import FieldDescriptor, FieldElement, tower_level
from .mvpoly import MultiPoly

logger = get_logger(__name__)

DEFAULT_CHUNK = 1 << 18
SLICE_ATTEMPTS = 8


# Points ----------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class ProjectivePoint:
    """A point of P^{n-1}; ``coords`` are encodings with first nonzero entry 1."""

    field: FieldDescriptor = dc_field(compare=False)
    coords: Tuple[int, ...] = ()

    def __post_init__(self):
        nonzero = [c for c in self.coords if c]
        if not nonzero:
            raise ValidationError("the zero vector is not a projective point", field="coords", value=self.coords)
        if nonzero[0] != 1:
            raise ValidationError("point is not normalized", field="coords", value=self.coords)

    @classmethod
    def normalize(cls, field: FieldDescriptor, coordinates: Sequence) -> "ProjectivePoint":
        row = normalize_rows(field, [[field(c).value if isinstance(c, FieldElement) else int(c) for c in coordinates]])
        return cls(field, tuple(int(v) for v in row[0]))

    @property
    def coordinates(self) -> Tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, c) for c in self.coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.modulus, self.coords))

    def to_serial(self) -> List:
        if self.field.r == 1:
            return list(self.coords)
        return [c.to_serial() for c in self.coordinates]

    def __str__(self) -> str:
        return "(" + ":".join(repr(c) for c in self.coordinates) + ")"


def normalize_rows(field: FieldDescriptor, rows):
    """Scale each row so its first nonzero entry is 1."""
    X = field.array(rows)
    if X.ndim != 2:
        raise ValidationError("expected a 2-d array of coordinates", field="rows", value=X.shape)
    nonzero = X != 0
    if not np.all(nonzero.any(axis=1)):
        raise ValidationError("zero vector among projective coordinates", field="rows")
    lead = np.argmax(nonzero, axis=1)
    pivots = X[np.arange(X.shape[0]), lead]
    return X / pivots[:, None]


def points_from_array(field: FieldDescriptor, X) -> FrozenSet[ProjectivePoint]:
    plain = np.asarray(X.view(np.ndarray), dtype=np.int64)
    return frozenset(ProjectivePoint(field, tuple(int(v) for v in row)) for row in plain)


# Systems ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class VarietySystem:
    """Homogeneous equations in ``nvars`` variables over a common field.

    A sliced system also carries the ``n x (s+1)`` matrix that maps its
    parameters into the ambient coordinates.
    """

    field: FieldDescriptor
    nvars: int
    members: Tuple[MultiPoly, ...] = ()
    parameterization: Optional[object] = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        for f in self.members:
            if f.field != self.field:
                raise FieldMismatchError(f"member over {f.field} in a system over {self.field}")
            if f.nvars != self.nvars:
                raise ValidationError("member variable count differs", field="members", value=f.nvars)
            if not f.is_homogeneous:
                raise ValidationError(f"member {f} is not homogeneous", field="members")

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(f.degree for f in self.members)

    @property
    def bezout_bound(self) -> int:
        """Product of member degrees."""
        return math.prod(max(d, 1) for d in self.degrees)

    def over(self, field: FieldDescriptor) -> "VarietySystem":
        """The same equations read over ``field`` (prime-subfield coefficients)."""
        if field == self.field:
            return self
        return VarietySystem(field, self.nvars, tuple(f.lift(field) for f in self.members), None, self.label)

    def vanishing_mask(self, X) -> np.ndarray:
        mask = np.ones(X.shape[0], dtype=bool)
        for f in self.members:
            if not mask.any():
                break
            mask &= np.asarray(f.evaluate_many(X) == 0)
        return mask

    def __str__(self) -> str:
        name = self.label or "system"
        return f"{name}[{', '.join(str(d) for d in self.degrees)}] in P^{self.nvars - 1} over {self.field}"


# Enumeration ------------------------------------------------------------------


def projective_count(n: int, q: int) -> int:
    """|P^{n-1}(F_q)|."""
    return (q ** n - 1) // (q - 1)


def _check_budget(n: int, q: int) -> int:
    count = projective_count(n, q)
    limit = get_config().budgets.projective_points
    if count > limit:
        raise BudgetExceededError(
            f"P^{n - 1}(F_{q}) has {count} points",
            resource="projective_points",
            limit=limit,
            requested=count,
        )
    return count


def iter_projective_chunks(n: int, field: FieldDescriptor, chunk_size: int = DEFAULT_CHUNK) -> Iterator:
    """Normalized points of P^{n-1}(field) as galois arrays of at most ``chunk_size`` rows."""
    if n < 1:
        raise ValidationError("need at least one coordinate", field="n", value=n)
    q = field.order
    _check_budget(n, q)
    gf = field.gf
    for lead in range(n):
        tail = n - 1 - lead
        total = q ** tail
        powers = q ** np.arange(tail - 1, -1, -1, dtype=np.int64)
        for start in range(0, total, chunk_size):
            idx = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
            block = np.zeros((idx.size, n), dtype=np.int64)
            block[:, lead] = 1
            if tail:
                block[:, lead + 1:] = (idx[:, None] // powers[None, :]) % q
            yield gf(block)


def iter_affine_chunks(n: int, field: FieldDescriptor, chunk_size: int = DEFAULT_CHUNK) -> Iterator:
    """All of F^n, zero vector first, in base-q order."""
    q = field.order
    total = q ** n
    limit = get_config().budgets.projective_points
    if total > limit:
        raise BudgetExceededError(
            f"F_{q}^{n} has {total} vectors",
            resource="projective_points",
            limit=limit,
            requested=total,
        )
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk_size):
        idx = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
        yield field.gf((idx[:, None] // powers[None, :]) % q)


def enumerate_projective(n: int, field: FieldDescriptor) -> Iterator[ProjectivePoint]:
    """Every point of P^{n-1}(field) exactly once, in a fixed order."""
    for chunk in iter_projective_chunks(n, field):
        for row in np.asarray(chunk.view(np.ndarray), dtype=np.int64):
            yield ProjectivePoint(field, tuple(int(v) for v in row))


def variety_array(system: VarietySystem, field: FieldDescriptor):
    """Normalized points of the system over ``field`` as one galois array."""
    lifted = system.over(field)
    hits = [chunk[lifted.vanishing_mask(chunk)] for chunk in iter_projective_chunks(system.nvars, field)]
    hits = [h for h in hits if h.shape[0]]
    if not hits:
        return field.gf.Zeros((0, system.nvars))
    return field.gf(np.vstack([np.asarray(h.view(np.ndarray)) for h in hits]))


def count_points(system: VarietySystem, field: FieldDescriptor) -> int:
    lifted = system.over(field)
    return sum(int(lifted.vanishing_mask(chunk).sum()) for chunk in iter_projective_chunks(system.nvars, field))


def variety_points(system: VarietySystem, field: FieldDescriptor) -> FrozenSet[ProjectivePoint]:
    """Points of P^{n-1}(field) where every member vanishes."""
    points = points_from_array(field, variety_array(system, field))
    logger.debug(f"{system}: {len(points)} points over {field}")
    return points


def singular_points(f: MultiPoly, field: FieldDescriptor) -> FrozenSet[ProjectivePoint]:
    """Points where f and all of its partial derivatives vanish."""
    if f.is_zero() or not f.is_homogeneous:
        raise ValidationError("singular locus needs a nonzero homogeneous form", field="f", value=str(f))
    system = VarietySystem(f.field, f.nvars, (f, *(d for d in f.gradient() if not d.is_zero())))
    return variety_points(system, field)


# Slicing ------------------------------------------------------------------------


def _draw_parameterization(n: int, s: int, field: FieldDescriptor, rng: np.random.Generator):
    M = field.gf(rng.integers(0, field.order, size=(n, s + 1), dtype=np.int64))
    if np.linalg.matrix_rank(M) < s + 1:
        raise DegenerateSliceError(
            f"drawn {n}x{s + 1} parameterization is rank deficient",
            details={'field': str(field)},
        )
    return M


def random_linear_slice(system: VarietySystem, s: int, field: FieldDescriptor, seed: int) -> VarietySystem:
    """Restrict the system to a random P^s ⊂ P^{n-1} defined over ``field``.

    The linear subspace is the image of a full-rank ``n x (s+1)`` matrix M;
    the result lives in the s+1 parameters and records M.
    """
    n = system.nvars
    if not 0 <= s <= n - 1:
        raise ValidationError(f"slice dimension must lie in 0..{n - 1}", field="s", value=s)
    rng = np.random.default_rng(seed)

    @retry(
        stop=stop_after_attempt(SLICE_ATTEMPTS),
        retry=retry_if_exception_type(DegenerateSliceError),
        reraise=True,
    )
    def draw():
        return _draw_parameterization(n, s, field, rng)

    M = draw()
    lifted = system.over(field)
    members = tuple(f.substitute_linear(M) for f in lifted.members)
    return VarietySystem(field, s + 1, members, parameterization=M, label=f"{system.label or 'system'}|P^{s}")


def eliminate_linear(system: VarietySystem) -> Optional[VarietySystem]:
    """Solve the linear members; ``None`` when they only vanish at the origin.

    The remaining members are pulled back along a null-space basis of the
    linear forms, which leaves the projective point count unchanged.
    """
    linear = [f for f in system.members if f.degree == 1]
    if not linear:
        return system
    gf = system.field.gf
    L = gf.Zeros((len(linear), system.nvars))
    for i, f in enumerate(linear):
        for row, c in zip(f.exponents, f.coefficient_codes):
            L[i, int(np.argmax(row))] = int(c)
    basis = L.null_space()
    if basis.shape[0] == 0:
        return None
    rest = tuple(f.substitute_linear(basis.T) for f in system.members if f.degree != 1)
    return VarietySystem(system.field, basis.shape[0], rest, label=system.label)


@dataclass
class SliceStatistics:
    """Distinct-point counts over independent random slices."""

    slice_dim: int
    field: str
    trials: int
    bezout_bound: int
    counts: List[int] = dc_field(default_factory=list)
    improper: List[int] = dc_field(default_factory=list)
    seeds: List[int] = dc_field(default_factory=list)

    @property
    def proper_counts(self) -> List[int]:
        return [c for i, c in enumerate(self.counts) if i not in set(self.improper)]

    @property
    def min(self) -> Optional[int]:
        proper = self.proper_counts
        return min(proper) if proper else None

    @property
    def max(self) -> Optional[int]:
        proper = self.proper_counts
        return max(proper) if proper else None

    @property
    def histogram(self) -> Dict[int, int]:
        return dict(sorted(Counter(self.proper_counts).items()))

    @property
    def improper_count(self) -> int:
        return len(self.improper)

    def to_dict(self) -> dict:
        return {
            'slice_dim': self.slice_dim,
            'field': self.field,
            'trials': self.trials,
            'bezout_bound': self.bezout_bound,
            'min': self.min,
            'max': self.max,
            'histogram': {str(k): v for k, v in self.histogram.items()},
            'improper_count': self.improper_count,
            'seeds': self.seeds,
        }


def slice_point_count(
    system: VarietySystem,
    s: int,
    field: FieldDescriptor,
    trials: int,
    seed: int,
    degree_bound: Optional[int] = None,
) -> SliceStatistics:
    """Count points on ``trials`` random P^s-slices.

    A trial is improper when a member vanishes identically on the slice or the
    count exceeds ``degree_bound`` (the Bezout bound by default); improper
    trials are kept out of min/max/histogram.
    """
    bound = degree_bound if degree_bound is not None else system.bezout_bound
    stats = SliceStatistics(slice_dim=s, field=str(field), trials=trials, bezout_bound=bound)
    children = np.random.SeedSequence(seed).spawn(trials)
    for t, child in enumerate(children):
        trial_seed = int(child.generate_state(1)[0])
        stats.seeds.append(trial_seed)
        sliced = random_linear_slice(system, s, field, trial_seed)
        if any(f.is_zero() for f in sliced.members):
            stats.counts.append(-1)
            stats.improper.append(t)
            continue
        reduced = eliminate_linear(sliced)
        count = 0 if reduced is None else count_points(reduced, field)
        stats.counts.append(count)
        if reduced is not None and any(f.is_zero() for f in reduced.members):
            stats.improper.append(t)
        elif count > bound:
            stats.improper.append(t)
        logger.debug(f"slice trial {t}: {count} points")
    if stats.improper_count == trials:
        raise SliceError(
            f"all {trials} slices of {system} were improper",
            details=stats.to_dict(),
        )
    logger.info(f"Slices of {system}: max={stats.max} histogram={stats.histogram} improper={stats.improper_count}")
    return stats


# Growth -------------------------------------------------------------------------


@dataclass
class GrowthLevel:
    m: int
    order: int
    count: int

    @property
    def dimension_estimate(self) -> Optional[float]:
        if self.count <= 0:
            return None
        return math.log(self.count) / math.log(self.order)


@dataclass
class GrowthSeries:
    """Point counts along F_{q^m}, m = 1..M, with dimension estimates."""

    system: str
    levels: List[GrowthLevel] = dc_field(default_factory=list)
    truncated_at: Optional[int] = None

    @property
    def counts(self) -> List[int]:
        return [level.count for level in self.levels]

    @property
    def estimates(self) -> List[Optional[float]]:
        return [level.dimension_estimate for level in self.levels]

    def to_dict(self) -> dict:
        return {
            'system': self.system,
            'levels': [
                {'m': lv.m, 'order': lv.order, 'count': lv.count, 'estimate': lv.dimension_estimate}
                for lv in self.levels
            ],
            'truncated_at': self.truncated_at,
        }


def point_count_growth(system: VarietySystem, depth: int, base: Optional[FieldDescriptor] = None) -> GrowthSeries:
    """Counts over the tower base, base^2, ..., base^depth; stops at the first level over budget."""
    base = base or system.field
    series = GrowthSeries(system=str(system))
    for m in range(1, depth + 1):
        try:
            level_field = tower_level(base, m)
            count = count_points(system, level_field)
        except BudgetExceededError as exc:
            logger.warning(f"Point-count tower truncated at m={m}: {exc.message}")
            series.truncated_at = m
            break
        series.levels.append(GrowthLevel(m=m, order=level_field.order, count=count))
    return series
