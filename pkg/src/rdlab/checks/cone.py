"""The cone structure of Y123 over the diagonal point in characteristic p.

s1 = s2 = s3 = 0 is stable under x ↦ αx + β·(1, ..., 1) exactly when
C(n, 1), C(n, 2) and C(n, 3) vanish mod p, because of the shift identities

    s1(αx + β) = α s1 + n β
    s2(αx + β) = α² s2 + (n − 1) αβ s1 + C(n, 2) β²
    s3(αx + β) = α³ s3 + (n − 2) α²β s2 + C(n − 1, 2) αβ² s1 + C(n, 3) β³
"""

import itertools
import math
from typing import Dict, List, Sequence

import numpy as np
import sympy

from ..algebra.gf import FieldDescriptor, field_of_order, make_field
from ..algebra.mvpoly import MultiPoly, affine_shift_expand, elementary_symmetric, extend_variables
from ..algebra.projgeom import iter_affine_chunks
from ..models.report import CheckReport, CheckStatus
from ..utils.errors import ConfigurationError, ValidationError
from ..utils.logging import get_logger
from ..utils.validators import validate_positive, validate_prime

logger = get_logger(__name__)

SHIFT_PRIMES = (2, 3, 5, 7, 65537)
LUCAS_PRIMES = (2, 3, 5, 7)


# Lucas ----------------------------------------------------------------------


def lucas_binomial(n: int, k: int, p: int) -> int:
    """C(n, k) mod p as the product of digitwise binomials in base p."""
    validate_prime(p)
    if k < 0 or k > n:
        return 0
    result = 1
    while n or k:
        n, n_digit = divmod(n, p)
        k, k_digit = divmod(k, p)
        if k_digit > n_digit:
            return 0
        result = result * math.comb(n_digit, k_digit) % p
    return result


def cone_condition(n: int, p: int) -> bool:
    """C(n, 1) ≡ C(n, 2) ≡ C(n, 3) ≡ 0 mod p."""
    return all(lucas_binomial(n, k, p) == 0 for k in (1, 2, 3))


def is_prime_power_of(n: int, p: int) -> bool:
    return n >= 1 and n == p ** sympy.multiplicity(p, n)


def check_lucas_table(n_max: int = 64, primes: Sequence[int] = LUCAS_PRIMES) -> CheckReport:
    """Lucas residues agree with big-integer binomials for all n ≤ n_max."""
    validate_positive(n_max, "n_max")
    mismatches = []
    satisfying: Dict[str, List[int]] = {}
    for p in primes:
        satisfying[str(p)] = [n for n in range(1, n_max + 1) if cone_condition(n, p)]
        for n in range(n_max + 1):
            for k in range(n + 1):
                if lucas_binomial(n, k, p) != math.comb(n, k) % p:
                    mismatches.append({'n': n, 'k': k, 'p': p})
    params = {'n_max': n_max, 'primes': list(primes)}
    if mismatches:
        return CheckReport(
            check_id="rem5.2.lucas-condition",
            status=CheckStatus.FAIL,
            params=params,
            message=f"{len(mismatches)} Lucas residues disagree with direct binomials",
            witness={'mismatches': mismatches[:10]},
        )
    return CheckReport(
        check_id="rem5.2.lucas-condition",
        status=CheckStatus.PASS,
        params=params,
        message="Lucas residues match direct binomials",
        stats={'cone_condition_holds_for': satisfying},
    )


def cone_condition_control(n: int = 6, p: int = 2) -> CheckReport:
    """(6, 2) violates the cone condition: C(6, 2) = 15 is odd."""
    residues = {str(k): lucas_binomial(n, k, p) for k in (1, 2, 3)}
    holds = cone_condition(n, p)
    return CheckReport(
        check_id="rem5.2.lucas-condition.negative",
        status=CheckStatus.PASS if holds else CheckStatus.FAIL,
        params={'n': n, 'p': p},
        message="cone condition holds" if holds else "cone condition fails",
        witness={'residues': residues},
    )


# Shift identities -------------------------------------------------------------


def shift_closed_forms(n: int, field: FieldDescriptor, bare_constant: bool = False) -> List[MultiPoly]:
    """Right-hand sides of the three shift identities in x1..xn, α, β.

    With ``bare_constant`` the s3 identity carries C(n, 3) without β³.
    """
    k = n + 2
    s = [extend_variables(elementary_symmetric(n, j, field), k) for j in (1, 2, 3)]
    a = MultiPoly.variable(field, k, n)
    b = MultiPoly.variable(field, k, n + 1)
    c = [math.comb(n, 2), math.comb(n, 3), math.comb(n - 1, 2)]
    one = MultiPoly.constant(field, k, 1)
    cubic = one if bare_constant else b ** 3
    return [
        a * s[0] + b * n,
        a ** 2 * s[1] + a * b * s[0] * (n - 1) + b ** 2 * c[0],
        a ** 3 * s[2] + a ** 2 * b * s[1] * (n - 2) + a * b ** 2 * s[0] * c[2] + cubic * c[1],
    ]


def integer_shift_residuals(n: int) -> List[sympy.Expr]:
    """Expansion minus closed form for s1, s2, s3 over the integers (zero when the identities hold)."""
    xs = sympy.symbols(f"x1:{n + 1}")
    a, b = sympy.symbols("alpha beta")
    shifted = [a * x + b for x in xs]

    def esym(values, j):
        return sympy.Add(*[sympy.Mul(*combo) for combo in itertools.combinations(values, j)])

    closed = [
        a * esym(xs, 1) + n * b,
        a ** 2 * esym(xs, 2) + (n - 1) * a * b * esym(xs, 1) + math.comb(n, 2) * b ** 2,
        a ** 3 * esym(xs, 3) + (n - 2) * a ** 2 * b * esym(xs, 2)
        + math.comb(n - 1, 2) * a * b ** 2 * esym(xs, 1) + math.comb(n, 3) * b ** 3,
    ]
    gens = (*xs, a, b)
    return [
        sympy.Poly(esym(shifted, j), *gens) - sympy.Poly(closed[j - 1], *gens)
        for j in (1, 2, 3)
    ]


def check_shift_identities(n: int, primes: Sequence[int] = SHIFT_PRIMES) -> CheckReport:
    """The three shift identities, over Z and over F_p for each tested prime."""
    if not 3 <= n <= 18:
        raise ValidationError("shift identities are checked for 3 <= n <= 18", field="n", value=n)
    params = {'n': n, 'primes': list(primes)}
    residuals = integer_shift_residuals(n)
    nonzero = [j + 1 for j, r in enumerate(residuals) if not r.is_zero]
    if nonzero:
        return CheckReport(
            check_id="lem5.1d.shift-identities",
            status=CheckStatus.FAIL,
            params=params,
            message=f"integer identities fail for s{nonzero}",
            witness={'residuals': [str(r.as_expr()) for r in residuals]},
        )

    bare_constant: Dict[str, bool] = {}
    cone: Dict[str, bool] = {}
    for p in primes:
        field = make_field(p)
        for j, (lhs_base, rhs) in enumerate(zip((1, 2, 3), shift_closed_forms(n, field)), start=1):
            lhs = affine_shift_expand(elementary_symmetric(n, lhs_base, field))
            if lhs != rhs:
                return CheckReport(
                    check_id="lem5.1d.shift-identities",
                    status=CheckStatus.FAIL,
                    params=params,
                    message=f"s{j} shift identity fails over F_{p}",
                    witness={'difference': str(lhs - rhs)},
                )
        lhs3 = affine_shift_expand(elementary_symmetric(n, 3, field))
        bare_constant[str(p)] = lhs3 == shift_closed_forms(n, field, bare_constant=True)[2]
        cone[str(p)] = cone_condition(n, p)
    return CheckReport(
        check_id="lem5.1d.shift-identities",
        status=CheckStatus.PASS,
        params=params,
        message=f"s1, s2, s3 shift identities hold for n={n} over Z and F_p",
        stats={
            's3_variant_without_beta_cubed_is_identity': bare_constant,
            'cone_condition': cone,
        },
    )


# Cone closure --------------------------------------------------------------------


def _y123_affine_points(n: int, field: FieldDescriptor):
    members = [elementary_symmetric(n, j, field) for j in (1, 2, 3)]
    hits = []
    for chunk in iter_affine_chunks(n, field):
        mask = np.ones(chunk.shape[0], dtype=bool)
        for f in members:
            mask &= np.asarray(f.evaluate_many(chunk) == 0)
        if mask.any():
            hits.append(np.asarray(chunk[mask].view(np.ndarray)))
    return field.gf(np.vstack(hits)), members


def _closure_failure(n: int, field: FieldDescriptor, batch: int = 1 << 18):
    """First (y, α, β) with αy + β off Y123, plus the number of points tested."""
    points, members = _y123_affine_points(n, field)
    gf = field.gf
    elements = gf.elements
    shifts = field.order ** 2
    alphas = np.repeat(elements, field.order)
    betas = np.tile(elements, field.order)
    step = max(1, batch // shifts)
    for start in range(0, points.shape[0], step):
        block = points[start:start + step]
        shifted = (alphas[None, :, None] * block[:, None, :] + betas[None, :, None]).reshape(-1, n)
        mask = np.ones(shifted.shape[0], dtype=bool)
        for f in members:
            mask &= np.asarray(f.evaluate_many(shifted) == 0)
        if not mask.all():
            k = int(np.flatnonzero(~mask)[0])
            i, s = divmod(k, shifts)
            return (block[i], alphas[s], betas[s]), points.shape[0]
    return None, points.shape[0]


def check_cone_closure(n: int, q: int) -> CheckReport:
    """Every F_q-point of the affine cone stays on it under all shifts αy + β."""
    field = field_of_order(q)
    if not (is_prime_power_of(n, field.p) and cone_condition(n, field.p)):
        raise ConfigurationError(
            f"cone closure needs n a power of p = {field.p} with C(n,1..3) ≡ 0; got n = {n}",
            details={'n': n, 'q': q},
        )
    failure, tested = _closure_failure(n, field)
    params = {'n': n, 'q': q}
    if failure:
        y, alpha, beta = failure
        return CheckReport(
            check_id="lem5.1d.cone-closure",
            status=CheckStatus.FAIL,
            params=params,
            message="a shifted point leaves Y123",
            witness={'point': y, 'alpha': alpha, 'beta': beta},
        )
    return CheckReport(
        check_id="lem5.1d.cone-closure",
        status=CheckStatus.PASS,
        params=params,
        message=f"all {tested} affine points stay on Y123 under {q * q} shifts",
        stats={'affine_points': tested, 'shifts': q * q},
    )


def cone_closure_control(n: int = 6, q: int = 5) -> CheckReport:
    """Outside the cone condition closure must break; report the witness."""
    field = field_of_order(q)
    failure, tested = _closure_failure(n, field)
    params = {'n': n, 'q': q}
    if failure:
        y, alpha, beta = failure
        return CheckReport(
            check_id="lem5.1d.cone-closure.negative",
            status=CheckStatus.FAIL,
            params=params,
            message="a shifted point leaves Y123",
            witness={'point': y, 'alpha': alpha, 'beta': beta},
            stats={'affine_points': tested},
        )
    return CheckReport(
        check_id="lem5.1d.cone-closure.negative",
        status=CheckStatus.PASS,
        params=params,
        message="closure held although the cone condition fails",
        stats={'affine_points': tested},
    )
