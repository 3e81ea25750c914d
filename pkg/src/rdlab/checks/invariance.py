"""Invariance of the symplectic and hermitian hypersurfaces under their groups."""

import itertools
from typing import List, Optional, Tuple

import numpy as np

from ..algebra.gf import make_quadratic_extension, field_of_order
from ..algebra.grouplab import GroupHandle, special_unitary_group, symplectic_group
from ..algebra.mvpoly import MultiPoly, hermitian_norm_poly, linear_substitute, symplectic_form_poly
from ..algebra.projgeom import iter_projective_chunks, normalize_rows
from ..core.config import get_config
from ..models.report import CheckReport, CheckStatus
from ..utils.errors import BudgetExceededError
from ..utils.logging import get_logger

logger = get_logger(__name__)


def _elements(G: GroupHandle, extra_random_words: int, seed: int) -> List[Tuple[str, object]]:
    rng = np.random.default_rng(seed)
    length = get_config().sampling.word_length
    elements = [(f"generator[{i}]", g) for i, g in enumerate(G.generators)]
    elements += [(f"word[{k}]", G.random_word(length, rng)) for k in range(extra_random_words)]
    return elements


def _verdict(G: GroupHandle) -> CheckStatus:
    """PASS needs a group whose order was certified; otherwise the result is evidence."""
    if G.certified:
        return CheckStatus.PASS
    logger.warning(f"{G.name} was not certified; reporting evidence")
    return CheckStatus.EVIDENCE


def _qualified(G: GroupHandle, message: str) -> str:
    if G.certified:
        return message
    return f"{message} (generators of {G.name} not certified against |{G.name}| = {G.declared_order})"


def _first_nonzero_delta(f: MultiPoly, elements) -> Optional[Tuple[str, object, MultiPoly]]:
    for label, g in elements:
        delta = linear_substitute(f, g) - f
        if not delta.is_zero():
            return label, g, delta
    return None


def check_symplectic_invariance(m: int, q: int, extra_random_words: int = 100, seed: int = 42) -> CheckReport:
    """f(gx) − f(x) = 0 for f(x) = ω(x, x^q) and every tested g in Sp_{2m}(q)."""
    G = symplectic_group(m, q)
    f = symplectic_form_poly(m, q, G.field)
    elements = _elements(G, extra_random_words, seed)
    params = {'m': m, 'q': q, 'extra_random_words': extra_random_words}
    hit = _first_nonzero_delta(f, elements)
    if hit:
        label, g, delta = hit
        return CheckReport(
            check_id="prop3.1a.sympl-invariance",
            status=CheckStatus.FAIL,
            params=params,
            message=f"Δ ≠ 0 for {label}",
            witness={'element': g, 'delta': str(delta)},
            seed=seed,
        )
    return CheckReport(
        check_id="prop3.1a.sympl-invariance",
        status=_verdict(G),
        params=params,
        message=_qualified(G, f"Δ = 0 for {len(G.generators)} generators and {extra_random_words} words of {G.name}"),
        stats={'generators': len(G.generators), 'words': extra_random_words, 'degree': f.degree, 'certified': G.certified},
        seed=seed,
    )


def symplectic_invariance_control(m: int = 2, q: int = 3) -> CheckReport:
    """diag(2, 1, ..., 1) is not symplectic; Δ must be nonzero."""
    field = field_of_order(q)
    f = symplectic_form_poly(m, q, field)
    g = field.gf.Identity(2 * m)
    g[0, 0] = 2 % field.p
    delta = linear_substitute(f, g) - f
    status = CheckStatus.PASS if delta.is_zero() else CheckStatus.FAIL
    return CheckReport(
        check_id="prop3.1a.sympl-invariance.negative",
        status=status,
        params={'m': m, 'q': q},
        message="Δ = 0" if delta.is_zero() else "Δ ≠ 0 for a non-symplectic diagonal matrix",
        witness={'element': g, 'delta': str(delta)},
    )


def _vanishes_on_points(f: MultiPoly, g, field) -> Optional[object]:
    """First point where f(gx) ≠ f(x), evaluated pointwise over P^{n-1}(field)."""
    for chunk in iter_projective_chunks(f.nvars, field):
        moved = chunk @ g.T
        bad = np.flatnonzero(np.asarray(f.evaluate_many(moved) != f.evaluate_many(chunk)))
        if bad.size:
            return chunk[bad[0]]
    return None


def check_unitary_invariance(n: int, q: int, extra_random_words: int = 100, seed: int = 42) -> CheckReport:
    """h(gx, gx) = h(x, x) for U_n(q), symbolically and by exhaustive evaluation.

    The symbolic route (Δ is the zero polynomial) decides the status. The
    pointwise route shows Δ vanishes on all F_{q^2}-points of P^{n-1}; since
    deg Δ ≤ q + 1 is below the least degree q^2 + 1 of a nonzero form with that
    property, this independently forces Δ = 0.
    """
    G = special_unitary_group(n, q, full_unitary=True)
    f = hermitian_norm_poly(n, q).lift(G.field)
    elements = _elements(G, extra_random_words, seed)
    params = {'n': n, 'q': q, 'extra_random_words': extra_random_words}
    stats = {
        'group': G.name,
        'certified': G.certified,
        'generators': len(G.generators),
        'words': extra_random_words,
        'delta_degree_bound': q + 1,
        'minimal_vanishing_degree': q * q + 1,
    }
    hit = _first_nonzero_delta(f, elements)
    if hit:
        label, g, delta = hit
        return CheckReport(
            check_id="prop3.1b.unit-invariance",
            status=CheckStatus.FAIL,
            params=params,
            message=f"Δ ≠ 0 for {label}",
            witness={'element': g, 'delta': str(delta)},
            stats=stats,
            seed=seed,
        )

    try:
        for label, g in elements[:len(G.generators)]:
            point = _vanishes_on_points(f, g, G.field)
            if point is not None:
                return CheckReport(
                    check_id="prop3.1b.unit-invariance",
                    status=CheckStatus.FAIL,
                    params=params,
                    message=f"pointwise route disagrees for {label}",
                    witness={'element': g, 'point': point},
                    stats=stats,
                    seed=seed,
                )
        stats['pointwise_route'] = "vanishes on every F_{q^2}-point"
    except BudgetExceededError as exc:
        stats['pointwise_route'] = f"skipped: {exc.message}"

    if n <= 3 and q == 2:
        stats['minimal_vanishing_degree_computed'] = min_vanishing_degree(n, q).stats.get('min_degree')

    return CheckReport(
        check_id="prop3.1b.unit-invariance",
        status=_verdict(G),
        params=params,
        message=_qualified(G, f"Δ = 0 for all generators and {extra_random_words} words of {G.name}"),
        stats=stats,
        seed=seed,
    )


def unitary_invariance_control(n: int = 3, q: int = 3) -> CheckReport:
    """diag(α, 1, ..., 1) with α primitive in F_{q^2} is not unitary."""
    field = make_quadratic_extension(*_prime_power(q))
    f = hermitian_norm_poly(n, q).lift(field)
    g = field.gf.Identity(n)
    g[0, 0] = field.gf.primitive_element
    delta = linear_substitute(f, g) - f
    if delta.is_zero():
        return CheckReport(
            check_id="prop3.1b.unit-invariance.negative",
            status=CheckStatus.PASS,
            params={'n': n, 'q': q},
            message="Δ = 0",
        )
    point = None
    for chunk in iter_projective_chunks(n, field):
        values = delta.evaluate_many(chunk)
        hits = np.flatnonzero(np.asarray(values != 0))
        if hits.size:
            point = chunk[hits[0]]
            break
    return CheckReport(
        check_id="prop3.1b.unit-invariance.negative",
        status=CheckStatus.FAIL,
        params={'n': n, 'q': q},
        message="Δ ≠ 0 and Δ has a nonvanishing F_{q^2}-point",
        witness={'element': g, 'delta': str(delta), 'point': point},
    )


def _prime_power(q: int) -> Tuple[int, int]:
    field = field_of_order(q)
    return field.p, field.r


def _monomials(n: int, d: int) -> np.ndarray:
    rows = []
    for combo in itertools.combinations_with_replacement(range(n), d):
        row = [0] * n
        for i in combo:
            row[i] += 1
        rows.append(row)
    return np.array(rows, dtype=np.int64)


def evaluation_matrix(points, exponents: np.ndarray):
    """E[i, j] = x_i^{e_j} for points as rows of a galois array."""
    gf = type(points)
    top = int(exponents.max()) if exponents.size else 0
    E = gf.Ones((points.shape[0], exponents.shape[0]))
    for k in range(exponents.shape[1]):
        column = points[:, k]
        table = [gf.Ones(points.shape[0])]
        for _ in range(top):
            table.append(table[-1] * column)
        powers = gf(np.stack([np.asarray(t.view(np.ndarray)) for t in table], axis=1))
        E = E * powers[:, exponents[:, k]]
    return E


def min_vanishing_degree(n: int, q: int, max_degree: Optional[int] = None) -> CheckReport:
    """Least d with a nonzero degree-d form vanishing on all of P^{n-1}(F_{q^2})."""
    field = make_quadratic_extension(*_prime_power(q))
    points = normalize_rows(field, np.vstack([np.asarray(c.view(np.ndarray)) for c in iter_projective_chunks(n, field)]))
    budget = get_config().budgets.linear_algebra_entries
    max_degree = max_degree or q * q + 1
    ranks = {}
    for d in range(1, max_degree + 1):
        exponents = _monomials(n, d)
        entries = points.shape[0] * exponents.shape[0]
        if entries > budget:
            raise BudgetExceededError(
                f"evaluation matrix at degree {d} has {entries} entries",
                resource="linear_algebra_entries",
                limit=budget,
                requested=entries,
            )
        E = evaluation_matrix(points, exponents)
        rank = int(np.linalg.matrix_rank(E))
        ranks[d] = {'monomials': int(exponents.shape[0]), 'rank': rank}
        if rank < exponents.shape[0]:
            kernel = E.null_space()
            witness = MultiPoly(field, n, exponents, np.asarray(kernel[0].view(np.ndarray)))
            vanishes = not bool(np.any(np.asarray(witness.evaluate_many(points))))
            status = CheckStatus.PASS if d == q * q + 1 and vanishes else CheckStatus.FAIL
            report = CheckReport(
                check_id="prop3.1b.min-vanish",
                status=status,
                params={'n': n, 'q': q},
                message=f"least vanishing degree {d} (expected q^2 + 1 = {q * q + 1})",
                witness={'kernel_element': str(witness)},
                stats={'min_degree': d, 'kernel_dimension': int(kernel.shape[0]), 'ranks': ranks, 'points': int(points.shape[0])},
            )
            if n >= 2:
                report.witness['named_form'] = _named_form_vanishes(field, n, q, points)
            return report
    return CheckReport(
        check_id="prop3.1b.min-vanish",
        status=CheckStatus.FAIL,
        params={'n': n, 'q': q},
        message=f"no vanishing form up to degree {max_degree}",
        stats={'ranks': ranks},
    )


def _named_form_vanishes(field, n: int, q: int, points) -> dict:
    """x1^{q^2} x2 − x1 x2^{q^2} vanishes on every F_{q^2}-point."""
    Q = q * q
    first = [0] * n
    first[0], first[1] = Q, 1
    second = [0] * n
    second[0], second[1] = 1, Q
    form = MultiPoly.monomial(field, first) - MultiPoly.monomial(field, second)
    return {'form': str(form), 'vanishes': not bool(np.any(np.asarray(form.evaluate_many(points))))}
