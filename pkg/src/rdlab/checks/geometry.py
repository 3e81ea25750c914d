"""Y123 = {s1 = s2 = s3 = 0} ⊂ P^{n-1}, its quotient Z123 and their S_n-actions.

S_n permutes coordinates. Stabilizers are computed by brute force over all
n! permutations, vectorized over points: a permutation fixes a projective
point when the permuted, renormalized coordinates coincide.

Z123 lives in P(k^n / Δ) with Δ the diagonal line. A class is represented on
the complement {x_n = 0}: subtract y_n·(1, ..., 1), drop the last coordinate
and normalize.
"""

import itertools
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.gf import FieldDescriptor, field_of_order, tower_level
from ..algebra.mvpoly import elementary_symmetric
from ..algebra.projgeom import (
    VarietySystem,
    count_points,
    iter_projective_chunks,
    normalize_rows,
    point_count_growth,
    projective_count,
    slice_point_count,
    variety_array,
)
from ..core.config import get_config
from ..models.report import CheckReport, CheckStatus
from ..utils.errors import ConfigurationError, SliceError
from ..utils.logging import get_logger
from .cone import cone_condition, is_prime_power_of

logger = get_logger(__name__)

DIMENSION_TOLERANCE = 0.5
BLOCK_ROWS = 1 << 18


def y123_system(n: int, field: FieldDescriptor) -> VarietySystem:
    members = tuple(elementary_symmetric(n, j, field) for j in (1, 2, 3))
    return VarietySystem(field, n, members, label="Y123")


def all_permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64)


def _plain(X) -> np.ndarray:
    return np.asarray(X.view(np.ndarray), dtype=np.int64)


def _is_vertex(X) -> np.ndarray:
    return np.all(X == X[:, :1], axis=1)


# Stabilizers -------------------------------------------------------------------


def stabilizer_orders(field: FieldDescriptor, points, perms: np.ndarray) -> np.ndarray:
    """|Stab_{S_n}(x)| for each normalized point x (rows of ``points``)."""
    orders = np.zeros(points.shape[0], dtype=np.int64)
    step = max(1, BLOCK_ROWS // len(perms))
    for start in range(0, points.shape[0], step):
        block = points[start:start + step]
        moved = block[:, perms].reshape(-1, block.shape[1])
        moved = normalize_rows(field, moved).reshape(block.shape[0], len(perms), block.shape[1])
        orders[start:start + step] = np.all(moved == block[:, None, :], axis=2).sum(axis=1)
    return orders


def z_representatives(field: FieldDescriptor, Y):
    """Canonical Z123 representatives of non-vertex points (rows of Y)."""
    D = (Y - Y[:, -1:])[:, :-1]
    return normalize_rows(field, D)


def _lift(field: FieldDescriptor, Z):
    return field.gf(np.hstack([_plain(Z), np.zeros((Z.shape[0], 1), dtype=np.int64)]))


def z_stabilizer_orders(field: FieldDescriptor, Z, perms: np.ndarray) -> np.ndarray:
    """|Stab_{S_n}(z)| for classes z in P(k^n / Δ)."""
    lifted = _lift(field, Z)
    n = lifted.shape[1]
    orders = np.zeros(Z.shape[0], dtype=np.int64)
    step = max(1, BLOCK_ROWS // len(perms))
    for start in range(0, Z.shape[0], step):
        block = lifted[start:start + step]
        moved = z_representatives(field, block[:, perms].reshape(-1, n))
        moved = moved.reshape(block.shape[0], len(perms), n - 1)
        orders[start:start + step] = np.all(moved == Z[start:start + step][:, None, :], axis=2).sum(axis=1)
    return orders


# Sampling over extensions ----------------------------------------------------------


def triangular_sample(n: int, field: FieldDescriptor, rng: np.random.Generator):
    """Points of Y123 over ``field`` with x4..xn fixed at random.

    x1 is solved from s1 = 0 and (x2, x3) runs over all of field², so the
    remaining conditions s2 = s3 = 0 are scanned in one vectorized pass.
    """
    gf = field.gf
    Q = field.order
    tail = gf(rng.integers(0, Q, size=n - 3, dtype=np.int64))
    elements = gf.elements
    x2 = np.repeat(elements, Q)
    x3 = np.tile(elements, Q)
    x1 = -(x2 + x3 + np.sum(tail))
    X = gf(np.column_stack([_plain(x1), _plain(x2), _plain(x3), np.tile(_plain(tail), (Q * Q, 1))]))
    mask = np.any(X != 0, axis=1)
    for j in (2, 3):
        mask &= np.asarray(elementary_symmetric(n, j, field).evaluate_many(X) == 0)
    if not mask.any():
        return gf.Zeros((0, n))
    found = normalize_rows(field, X[mask])
    found = found[~_is_vertex(found)]
    return gf(np.unique(_plain(found), axis=0)) if found.shape[0] else found


def escalate(
    n: int,
    fields: Sequence[FieldDescriptor],
    draws: int,
    rng: np.random.Generator,
    trivial: callable,
) -> Tuple[Optional[object], Optional[FieldDescriptor], int]:
    """Sample Y123 over each field until ``trivial(field, points)`` flags a row."""
    sampled = 0
    for field in fields:
        for _ in range(draws):
            points = triangular_sample(n, field, rng)
            sampled += points.shape[0]
            if not points.shape[0]:
                continue
            hits = np.flatnonzero(trivial(field, points))
            if hits.size:
                return points[hits[0]], field, sampled
        logger.info(f"No trivial-stabilizer point among {sampled} samples over F_{field.order}")
    return None, None, sampled


def _escalation_fields(q: int, escalation: Sequence[int]) -> List[FieldDescriptor]:
    base = field_of_order(q)
    fields = []
    for order in escalation:
        target = field_of_order(order)
        if target.p != base.p or target.r % base.r:
            raise ConfigurationError(f"F_{order} does not contain F_{q}", details={'q': q, 'field': order})
        fields.append(target)
    return fields


# Checks --------------------------------------------------------------------------------


def y123_generic_freeness(n: int, q: int, escalation: Sequence[int] = (), seed: int = 42) -> CheckReport:
    """Search for a point of Y123 with trivial S_n-stabilizer."""
    if n > 8:
        raise ConfigurationError("stabilizer brute force needs n <= 8", details={'n': n})
    field = field_of_order(q)
    perms = all_permutations(n)
    Y = variety_array(y123_system(n, field), field)
    params = {'n': n, 'q': q, 'escalation': list(escalation)}
    orders = stabilizer_orders(field, Y, perms)
    vertex = np.flatnonzero(_is_vertex(Y))
    stats = {
        'points': int(Y.shape[0]),
        'stabilizer_orders': {str(k): int(v) for k, v in zip(*np.unique(orders, return_counts=True))},
        'vertex_stabilizer': int(orders[vertex[0]]) if vertex.size else None,
    }
    if cone_condition(n, field.p) and not vertex.size:
        return CheckReport(
            check_id="lem5.1c.y123-free",
            status=CheckStatus.FAIL,
            params=params,
            message="the diagonal point is missing although C(n, 1..3) vanish",
            stats=stats,
            seed=seed,
        )
    trivial = np.flatnonzero(orders == 1)
    if trivial.size:
        return CheckReport(
            check_id="lem5.1c.y123-free",
            status=CheckStatus.EVIDENCE,
            params=params,
            message=f"trivial stabilizer over F_{q}",
            witness={'point': Y[trivial[0]], 'field': q},
            stats=stats,
            seed=seed,
        )

    rng = np.random.default_rng(seed)
    draws = get_config().sampling.escalation_draws
    point, found_in, sampled = escalate(
        n, _escalation_fields(q, escalation), draws, rng,
        lambda F, P: stabilizer_orders(F, P, perms) == 1,
    )
    stats['escalation_samples'] = sampled
    if point is None:
        return CheckReport(
            check_id="lem5.1c.y123-free",
            status=CheckStatus.INCONCLUSIVE,
            params=params,
            message="no trivial-stabilizer point found over the escalation fields",
            stats=stats,
            seed=seed,
        )
    return CheckReport(
        check_id="lem5.1c.y123-free",
        status=CheckStatus.EVIDENCE,
        params=params,
        message=f"every F_{q}-point has a nontrivial stabilizer; trivial stabilizer found over F_{found_in.order}",
        witness={'point': point, 'field': found_in.order},
        stats=stats,
        seed=seed,
    )


def z123_construct_and_verify(
    n: int,
    q: int,
    escalation: Sequence[int] = (),
    seed: int = 42,
    sampled_points: Optional[int] = None,
) -> CheckReport:
    """Build Z123 representatives and verify the descended S_n-action."""
    field = field_of_order(q)
    if not (is_prime_power_of(n, field.p) and cone_condition(n, field.p)):
        raise ConfigurationError(
            f"Z123 needs n a power of p = {field.p} with C(n,1..3) ≡ 0; got n = {n}",
            details={'n': n, 'q': q},
        )
    gf = field.gf
    sampled_points = sampled_points or get_config().sampling.sampled_points
    rng = np.random.default_rng(seed)
    perms = all_permutations(n)
    params = {'n': n, 'q': q, 'escalation': list(escalation), 'complement': f"x{n} = 0"}

    Y = variety_array(y123_system(n, field), field)
    Y = Y[~_is_vertex(Y)]
    Z = z_representatives(field, Y)
    distinct = np.unique(_plain(Z), axis=0)
    stats = {
        'y_points_off_vertex': int(Y.shape[0]),
        'z_points': int(distinct.shape[0]),
        'expected_z_points': int(Y.shape[0]) // q,
    }
    if distinct.shape[0] * q != Y.shape[0]:
        return CheckReport(
            check_id="prop6.1b.z123-descent",
            status=CheckStatus.FAIL,
            params=params,
            message="lines through the vertex do not carry q points each",
            stats=stats,
            seed=seed,
        )

    # lines through the vertex collapse to one class
    nonzero = gf.elements[1:]
    alphas = np.repeat(nonzero, q)
    betas = np.tile(gf.elements, q - 1)
    for start in range(0, Y.shape[0], max(1, BLOCK_ROWS // len(alphas))):
        block = Y[start:start + max(1, BLOCK_ROWS // len(alphas))]
        shifted = (alphas[None, :, None] * block[:, None, :] + betas[None, :, None]).reshape(-1, n)
        images = z_representatives(field, shifted).reshape(block.shape[0], len(alphas), n - 1)
        expected = Z[start:start + block.shape[0]]
        bad = np.argwhere(~np.all(images == expected[:, None, :], axis=2))
        if bad.size:
            i, s = bad[0]
            return CheckReport(
                check_id="prop6.1b.z123-descent",
                status=CheckStatus.FAIL,
                params=params,
                message="representative depends on the point of the line",
                witness={'point': block[i], 'alpha': alphas[s], 'beta': betas[s]},
                stats=stats,
                seed=seed,
            )

    # permuting then canonicalizing equals acting on the class
    chosen = rng.choice(Y.shape[0], size=min(sampled_points, Y.shape[0]), replace=False)
    for i in np.sort(chosen):
        y = Y[i]
        direct = z_representatives(field, y[perms])
        via_class = z_representatives(field, _lift(field, Z[i:i + 1])[0][perms])
        if not np.array_equal(direct, via_class):
            k = int(np.flatnonzero(~np.all(direct == via_class, axis=1))[0])
            return CheckReport(
                check_id="prop6.1b.z123-descent",
                status=CheckStatus.FAIL,
                params=params,
                message="S_n-action does not descend",
                witness={'point': y, 'permutation': perms[k]},
                stats=stats,
                seed=seed,
            )
    stats['equivariance_points'] = int(len(chosen))
    stats['permutations'] = int(len(perms))

    Zd = gf(distinct)
    orders = z_stabilizer_orders(field, Zd, perms)
    stats['stabilizer_orders'] = {str(k): int(v) for k, v in zip(*np.unique(orders, return_counts=True))}
    trivial = np.flatnonzero(orders == 1)
    if trivial.size:
        witness, found_in = Zd[trivial[0]], q
    else:
        draws = get_config().sampling.escalation_draws

        def trivial_on_z(F, P):
            return z_stabilizer_orders(F, z_representatives(F, P), perms) == 1

        point, found_field, sampled = escalate(n, _escalation_fields(q, escalation), draws, rng, trivial_on_z)
        stats['escalation_samples'] = sampled
        if point is None:
            return CheckReport(
                check_id="prop6.1b.z123-descent",
                status=CheckStatus.INCONCLUSIVE,
                params=params,
                message="descent verified; no trivial-stabilizer class found",
                stats=stats,
                seed=seed,
            )
        witness = z_representatives(found_field, point[None, :])[0]
        found_in = found_field.order
    return CheckReport(
        check_id="prop6.1b.z123-descent",
        status=CheckStatus.EVIDENCE,
        params=params,
        message=f"descent verified; trivial-stabilizer class over F_{found_in}",
        witness={'class': witness, 'field': found_in},
        stats=stats,
        seed=seed,
    )


def _within(estimate: Optional[float], target: float) -> bool:
    return estimate is not None and abs(estimate - target) <= DIMENSION_TOLERANCE


def y123_degree_and_dimension(
    n: int,
    q: int,
    tower_depth: int = 2,
    trials: int = 50,
    seed: int = 42,
    slice_degree: int = 3,
) -> CheckReport:
    """Degree evidence from random slices, dimension evidence from point counts."""
    field = field_of_order(q)
    system = y123_system(n, field)
    params = {'n': n, 'q': q, 'tower_depth': tower_depth, 'trials': trials, 'slice_degree': slice_degree}
    try:
        slices = slice_point_count(system, 3, tower_level(field, slice_degree), trials, seed)
    except SliceError as exc:
        return CheckReport(
            check_id="lem5.1b.degree-dimension",
            status=CheckStatus.INCONCLUSIVE,
            params=params,
            message=exc.message,
            stats={'slices': exc.details},
            seed=seed,
        )
    growth = point_count_growth(system, tower_depth)
    y_estimate = growth.estimates[0] if growth.levels else None
    z_count = (growth.counts[0] - 1) // q if growth.levels else 0
    z_estimate = math.log(z_count) / math.log(q) if z_count > 0 else None
    stats = {
        'slices': slices.to_dict(),
        'growth': growth.to_dict(),
        'y_dimension_estimate': y_estimate,
        'y_dimension_target': n - 4,
        'z_points': z_count,
        'z_dimension_estimate': z_estimate,
        'z_dimension_target': n - 5,
        'tolerance': DIMENSION_TOLERANCE,
    }
    if slices.max is not None and slices.max > 6:
        status, message = CheckStatus.FAIL, f"a proper slice carries {slices.max} > 6 points"
    elif _within(y_estimate, n - 4) and _within(z_estimate, n - 5):
        status, message = CheckStatus.EVIDENCE, f"max slice count {slices.max} <= 6; dimensions near {n - 4} and {n - 5}"
    else:
        status, message = CheckStatus.INCONCLUSIVE, "dimension estimates outside tolerance"
    return CheckReport(
        check_id="lem5.1b.degree-dimension",
        status=status,
        params=params,
        message=message,
        stats=stats,
        seed=seed,
    )


def check_hyperplane_control(n: int, q: int, tower_depth: int = 1, trials: int = 20, seed: int = 42) -> CheckReport:
    """{s1 = 0} has degree 1 and dimension n − 2; P^{n-1} is enumerated in full."""
    field = field_of_order(q)
    enumerated = sum(chunk.shape[0] for chunk in iter_projective_chunks(n, field))
    system = VarietySystem(field, n, (elementary_symmetric(n, 1, field),), label="hyperplane")
    slices = slice_point_count(system, 1, field, trials, seed)
    growth = point_count_growth(system, tower_depth)
    estimate = growth.estimates[0] if growth.levels else None
    params = {'n': n, 'q': q, 'tower_depth': tower_depth, 'trials': trials}
    stats = {
        'projective_points': enumerated,
        'expected_projective_points': projective_count(n, q),
        'hyperplane_points': count_points(system, field),
        'slices': slices.to_dict(),
        'growth': growth.to_dict(),
        'dimension_estimate': estimate,
        'dimension_target': n - 2,
    }
    ok = (
        enumerated == projective_count(n, q)
        and slices.max == 1
        and slices.min == 1
        and _within(estimate, n - 2)
    )
    return CheckReport(
        check_id="lem5.1b.hyperplane-calibration",
        status=CheckStatus.EVIDENCE if ok else CheckStatus.FAIL,
        params=params,
        message="degree 1 and dimension n − 2 recovered" if ok else "hyperplane control off target",
        stats=stats,
        seed=seed,
    )
