"""Structural facts about the finite groups the bound table depends on.

Orders come from stabilizer chains, simplicity from normal closures of
conjugacy class representatives. Exceptional isomorphisms (A6 ≅ PSL2(9),
SU4(2) ≅ PSp4(3)) are cited; only the order coincidences are checked.
"""

from typing import Dict, List, Sequence, Tuple

import numpy as np
from sympy.combinatorics.named_groups import DihedralGroup

from ..algebra.gf import field_of_order
from ..algebra.grouplab import (
    CentralProductSpec,
    GroupHandle,
    central_product,
    classical_order,
    conjugacy_classes,
    cyclic_group,
    derived_subgroup,
    is_simple,
    is_transitive,
    permutation_group,
    preserves_form,
    projective_image,
    scalars_in,
    special_linear_group,
    special_unitary_group,
    symplectic_group,
    weyl_e6,
)
from ..algebra.projgeom import iter_projective_chunks, normalize_rows
from ..core.config import get_config
from ..models.report import CheckReport, CheckStatus
from ..utils.logging import get_logger

logger = get_logger(__name__)

PSL2_9_ORDER = 360
PSP4_3_ORDER = 25920
CLASSICAL_CASES: Tuple[Tuple[str, int, int], ...] = (
    ("Sp", 2, 2),
    ("Sp", 2, 3),
    ("Sp", 4, 2),
    ("Sp", 4, 3),
    ("SU", 3, 2),
    ("SU", 4, 2),
    ("U", 3, 2),
)


def _report(check_id: str, failures: List[str], params: dict, stats: dict, passed: str) -> CheckReport:
    if failures:
        return CheckReport(
            check_id=check_id,
            status=CheckStatus.FAIL,
            params=params,
            message="; ".join(failures),
            stats=stats,
        )
    return CheckReport(check_id=check_id, status=CheckStatus.PASS, params=params, message=passed, stats=stats)


def _class_sizes(G: GroupHandle) -> List[int]:
    return sorted(len(c) for c in conjugacy_classes(G))


def check_psl2_9() -> CheckReport:
    """PSL2(9) on the 10 points of P^1(F_9): order 360, simple, 2-transitive."""
    P = projective_image(special_linear_group(2, 9))
    failures = []
    if P.order != PSL2_9_ORDER:
        failures.append(f"order {P.order} != {PSL2_9_ORDER}")
    simple = is_simple(P)
    if not simple:
        failures.append("not simple")
    two_transitive = is_transitive(P, 2)
    if not two_transitive:
        failures.append("not 2-transitive")
    stats = {
        'degree': P.degree,
        'order': P.order,
        'simple': simple,
        'two_transitive': two_transitive,
        'class_sizes': _class_sizes(P),
        'isomorphic_to': "A6 (cited)",
    }
    return _report("sec2.3.psl2-9", failures, {'n': 2, 'q': 9}, stats, "|PSL2(9)| = 360, simple and 2-transitive on P^1(F_9)")


def check_weyl_sequence() -> CheckReport:
    """W(E6) on 72 roots; W(E6)' has index 2, order 25920 and is simple."""
    W = weyl_e6()
    failures = []
    involutions = all((g * g).is_Identity and not g.is_Identity for g in W.generators)
    if not involutions:
        failures.append("a simple reflection is not an involution")
    D = derived_subgroup(W)
    index = W.order // D.order
    if W.order != 51840:
        failures.append(f"|W(E6)| = {W.order}")
    if index != 2 or D.order != PSP4_3_ORDER:
        failures.append(f"derived subgroup of order {D.order} and index {index}")
    simple = is_simple(D)
    if not simple:
        failures.append("derived subgroup not simple")
    stats = {
        'roots': W.degree,
        'order': W.order,
        'derived_order': D.order,
        'index': index,
        'abelianization': f"Z/{index}",
        'derived_simple': simple,
        'reflections_are_involutions': involutions,
    }
    return _report("thm1.3.weyl-e6", failures, {}, stats, "W(E6)/W(E6)' ≅ Z/2 with simple kernel of order 25920")


def check_sp4_3() -> CheckReport:
    """|Sp4(3)| = 51840 with centre ±I; the projective image has order 25920 and is simple."""
    G = symplectic_group(2, 3)
    P = projective_image(G)
    scalars = len(scalars_in(G))
    failures = []
    if G.order != 51840:
        failures.append(f"|Sp4(3)| = {G.order}")
    if scalars != 2:
        failures.append(f"{scalars} scalar matrices")
    if P.order != PSP4_3_ORDER:
        failures.append(f"|PSp4(3)| = {P.order}")
    simple = is_simple(P)
    if not simple:
        failures.append("PSp4(3) not simple")
    stats = {'order': G.order, 'scalars': scalars, 'projective_order': P.order, 'points': P.degree, 'simple': simple}
    return _report("thm1.3.sp4-3", failures, {'m': 2, 'q': 3}, stats, "|Sp4(3)| = 51840 and PSp4(3) simple of order 25920")


def check_su4_2() -> CheckReport:
    """|SU4(2)| = |PSp4(3)| = 25920; SU4(2) acts faithfully and simply on P^3(F_4)."""
    G = special_unitary_group(4, 2)
    P = projective_image(G)
    psp = classical_order("PSp", 4, 3)
    failures = []
    if G.order != PSP4_3_ORDER:
        failures.append(f"|SU4(2)| = {G.order}")
    if P.order != G.order:
        failures.append(f"projective image of order {P.order}")
    if psp != G.order:
        failures.append(f"|PSp4(3)| = {psp} differs from |SU4(2)|")
    simple = is_simple(P)
    if not simple:
        failures.append("not simple")
    stats = {
        'order': G.order,
        'psp4_3_order': psp,
        'projective_order': P.order,
        'points': P.degree,
        'simple': simple,
        'isomorphic_to': "PSp4(3) (cited)",
    }
    return _report("thm1.3.su4-2", failures, {'n': 4, 'q': 2}, stats, "|SU4(2)| = |PSp4(3)| = 25920, simple")


def _build(family: str, n: int, q: int) -> GroupHandle:
    if family == "Sp":
        return symplectic_group(n // 2, q)
    return special_unitary_group(n, q, full_unitary=family == "U")


def check_classical_orders(
    cases: Sequence[Tuple[str, int, int]] = CLASSICAL_CASES,
    words: int = 20,
    seed: int = 42,
) -> CheckReport:
    """Chain orders, word closure, form preservation and the scalar quotient law."""
    rng = np.random.default_rng(seed)
    length = get_config().sampling.word_length
    failures = []
    rows: Dict[str, dict] = {}
    for family, n, q in cases:
        G = _build(family, n, q)
        expected = classical_order(family, n, q)
        scalars = len(scalars_in(G))
        projective = projective_image(G).order
        sample = [G.random_word(length, rng) for _ in range(words)]
        closed = all(G.contains(w) for w in sample)
        preserved = all(preserves_form(w, G.form) and preserves_form(np.linalg.inv(w), G.form) for w in sample)
        rows[G.name] = {
            'order': G.order,
            'expected': expected,
            'scalars': scalars,
            'projective_order': projective,
            'words_closed': closed,
            'form_preserved': preserved,
        }
        if G.order != expected:
            failures.append(f"|{G.name}| = {G.order} != {expected}")
        if projective * scalars != G.order:
            failures.append(f"{G.name}: |PG|·|Z| = {projective * scalars} != {G.order}")
        if not closed:
            failures.append(f"{G.name}: a word left the group")
        if not preserved:
            failures.append(f"{G.name}: a word does not preserve the form")
    params = {'cases': [f"{f}({n},{q})" for f, n, q in cases], 'words': words}
    report = _report("sec3.classical-orders", failures, params, {'groups': rows}, f"{len(cases)} classical groups match their closed forms")
    report.seed = seed
    return report


def central_product_specs() -> Dict[str, CentralProductSpec]:
    """Z4∘Z4, Z2×Z3 (trivial gluing) and D8∘Z4."""
    z4 = cyclic_group(4)
    r = z4.generators[0]
    e4 = z4.identity()
    d8 = permutation_group("D8", DihedralGroup(4).generators, 4)
    rot = next(g for g in d8.generators if g.order() == 4)
    e8 = d8.identity()
    z2, z3 = cyclic_group(2), cyclic_group(3)
    return {
        'Z4∘Z4': CentralProductSpec(
            G=z4, H=z4, Z1=[e4, r ** 2],
            phi={tuple(e4.array_form): e4, tuple((r ** 2).array_form): r ** 2},
        ),
        'Z2×Z3': CentralProductSpec(
            G=z2, H=z3, Z1=[z2.identity()],
            phi={tuple(z2.identity().array_form): z3.identity()},
        ),
        'D8∘Z4': CentralProductSpec(
            G=d8, H=z4, Z1=[e8, rot ** 2],
            phi={tuple(e8.array_form): e4, tuple((rot ** 2).array_form): r ** 2},
        ),
    }


def check_central_products() -> CheckReport:
    """|G ∘ H| = |G|·|H| / |Z| and both factors embed."""
    failures = []
    rows = {}
    for label, spec in central_product_specs().items():
        product = central_product(spec)
        expected = spec.G.order * spec.H.order // len(spec.Z1)
        rows[label] = {
            'order': product.order,
            'expected': expected,
            'left_injective': product.left_injective,
            'right_injective': product.right_injective,
        }
        if product.order != expected:
            failures.append(f"{label}: order {product.order} != {expected}")
    return _report("sec4.central-product", failures, {'specs': list(rows)}, {'products': rows}, f"order law holds for {len(rows)} central products")


def _diagonal_permutations(n: int, q: int):
    """Permutations of P^{n-1}(F_q) induced by diag(λ, 1, ..., 1), λ ≠ 1, with the points."""
    field = field_of_order(q)
    points = field.gf(np.vstack([np.asarray(c.view(np.ndarray)) for c in iter_projective_chunks(n, field)]))
    moves = []
    for lam in field.gf.elements[2:]:
        D = field.gf.Identity(n)
        D[0, 0] = lam
        moves.append((lam, normalize_rows(field, points @ D.T)))
    return points, moves


def check_faithful_vs_free(n: int = 3, q: int = 7) -> CheckReport:
    """Faithful is weaker than generically free.

    The projective images of SL2(9) and Sp4(3) have kernel exactly the
    scalars. The diagonal group {diag(λ, 1, ..., 1)} acts faithfully on
    P^{n-1}(F_q) yet fixes the invariant hyperplane {x1 = 0} pointwise, so
    no point of that degree-one hypersurface has trivial stabilizer.
    """
    failures = []
    kernels = {}
    for G in (special_linear_group(2, 9), symplectic_group(2, 3)):
        scalars = len(scalars_in(G))
        image = projective_image(G).order
        kernel = G.order // image
        kernels[G.name] = {'kernel': kernel, 'scalars': scalars}
        if kernel != scalars:
            failures.append(f"{G.name}: kernel of order {kernel} but {scalars} scalars")

    points, moves = _diagonal_permutations(n, q)
    on_hyperplane = np.asarray(points[:, 0] == 0)
    faithful = all(bool(np.any(moved != points)) for _, moved in moves)
    fixed_pointwise = all(bool(np.all(moved[on_hyperplane] == points[on_hyperplane])) for _, moved in moves)
    if not faithful:
        failures.append("a nontrivial diagonal element acts trivially")
    if not fixed_pointwise:
        failures.append("the hyperplane {x1 = 0} is not fixed pointwise")
    stats = {
        'projective_kernels': kernels,
        'diagonal_elements': len(moves),
        'points': int(points.shape[0]),
        'hyperplane_points': int(on_hyperplane.sum()),
        'diagonal_action_faithful': faithful,
        'hyperplane_fixed_pointwise': fixed_pointwise,
    }
    return _report(
        "lem2.3.faithful-vs-free",
        failures,
        {'n': n, 'q': q},
        stats,
        "faithful actions with no free orbit on an invariant hyperplane exist",
    )


def check_group_facts() -> List[CheckReport]:
    """All group-structure checks in registry order."""
    return [
        check_psl2_9(),
        check_weyl_sequence(),
        check_sp4_3(),
        check_su4_2(),
        check_classical_orders(),
        check_central_products(),
        check_faithful_vs_free(),
    ]
