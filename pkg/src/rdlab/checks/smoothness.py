"""Smoothness of the invariant hypersurfaces via the Jacobian criterion."""

from typing import Dict, List, Optional

import numpy as np

from ..algebra.gf import field_of_order, tower_level
from ..algebra.mvpoly import MultiPoly, hermitian_norm_poly, symplectic_form_poly
from ..algebra.projgeom import singular_points
from ..models.report import CheckReport, CheckStatus
from ..utils.errors import BudgetExceededError, ValidationError
from ..utils.logging import get_logger

logger = get_logger(__name__)

KINDS = ("symplectic", "hermitian")


def invariant_form(kind: str, n: int, q: int) -> MultiPoly:
    """ω(x, x^q) (n = 2m) or h(x, x) in n variables over F_q."""
    if kind == "symplectic":
        if n % 2:
            raise ValidationError("symplectic forms need an even number of variables", field="n", value=n)
        return symplectic_form_poly(n // 2, q)
    if kind == "hermitian":
        return hermitian_norm_poly(n, q)
    raise ValidationError(f"unknown form kind {kind!r}", field="kind", value=kind)


def partials_are_permuted_powers(f: MultiPoly, q: int) -> Optional[List[int]]:
    """π with ∂f/∂x_i = c_i · x_{π(i)}^q (c_i ≠ 0), or None.

    When π is a bijection the partials vanish together only at the origin.
    """
    targets = []
    for d in f.gradient():
        if len(d) != 1:
            return None
        row = d.exponents[0]
        support = np.flatnonzero(row)
        if support.size != 1 or row[support[0]] != q:
            return None
        targets.append(int(support[0]))
    if sorted(targets) != list(range(f.nvars)):
        return None
    return targets


def check_smoothness(kind: str, n: int, q: int, tower_depth: int = 2) -> CheckReport:
    """The hypersurface {f = 0} has no singular points.

    Symbolically the partials are q-th powers of a permutation of the
    coordinates; enumeratively the singular locus is empty over F_{q^m},
    m = 1..tower_depth.
    """
    f = invariant_form(kind, n, q)
    params = {'kind': kind, 'n': n, 'q': q, 'tower_depth': tower_depth}
    permutation = partials_are_permuted_powers(f, q)
    gradient = {f"d/dx{i + 1}": str(d) for i, d in enumerate(f.gradient())}
    if permutation is None:
        return CheckReport(
            check_id="prop3.1.smoothness",
            status=CheckStatus.FAIL,
            params=params,
            message="partials are not q-th powers of permuted coordinates",
            witness={'gradient': gradient},
        )

    levels: Dict[str, int] = {}
    truncated = None
    for m in range(1, tower_depth + 1):
        field = tower_level(field_of_order(q), m)
        try:
            singular = singular_points(f.lift(field), field)
        except BudgetExceededError as exc:
            truncated = m
            logger.warning(f"Singular-point scan stopped at F_{field.order}: {exc.message}")
            break
        levels[str(field.order)] = len(singular)
        if singular:
            return CheckReport(
                check_id="prop3.1.smoothness",
                status=CheckStatus.FAIL,
                params=params,
                message=f"singular point over F_{field.order}",
                witness={'point': min(singular)},
            )

    message = f"no singular points over {', '.join('F_' + k for k in levels)}"
    if truncated:
        message += f"; scan truncated at m={truncated}"
    return CheckReport(
        check_id="prop3.1.smoothness",
        status=CheckStatus.EVIDENCE if truncated else CheckStatus.PASS,
        params=params,
        message=message,
        stats={'partial_targets': permutation, 'singular_counts': levels, 'truncated_at': truncated},
        witness={'gradient': gradient},
    )


def smoothness_control(p: int = 3, n: int = 3) -> CheckReport:
    """x1^p over F_p has identically vanishing gradient, so every zero is singular."""
    field = field_of_order(p)
    exponents = [0] * n
    exponents[0] = p
    f = MultiPoly.monomial(field, exponents)
    singular = singular_points(f, field)
    status = CheckStatus.FAIL if singular else CheckStatus.PASS
    return CheckReport(
        check_id="prop3.1.smoothness.negative",
        status=status,
        params={'p': p, 'n': n},
        message=f"{len(singular)} singular points on {{{f} = 0}}",
        witness={'point': min(singular)} if singular else {},
    )
