"""Permutation and matrix groups over finite fields.

Matrix groups are handled through their action on the nonzero vectors of
F^n: vector ``v`` gets index ``int(v) - 1`` where ``int(v)`` reads the
coordinate encodings as base-q digits, most significant first. Orders,
membership and stabilizers then come from sympy's Schreier-Sims machinery on
that permutation representation. Classical groups are certified by comparing
the chain order with the closed-form order; a mismatch is fatal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import AlternatingGroup, CyclicGroup, SymmetricGroup

from ..core.config import get_config
from ..utils.cache import memo
from ..utils.errors import (
    BudgetExceededError,
    GroupConstructionError,
    GroupError,
    ValidationError,
)
from ..utils.logging import get_logger
from .gf import FieldDescriptor, field_of_order, make_quadratic_extension
from .projgeom import iter_projective_chunks, normalize_rows, projective_count

logger = get_logger(__name__)


# Order formulas -------------------------------------------------------------


def classical_order(family: str, n: int, q: int) -> int:
    """Order of a classical group; ``n`` is the matrix size."""
    sl = q ** (n * (n - 1) // 2) * math.prod(q ** i - 1 for i in range(2, n + 1))
    su = q ** (n * (n - 1) // 2) * math.prod(q ** i - (-1) ** i for i in range(2, n + 1))
    if family == "GL":
        return sl * (q - 1)
    if family == "SL":
        return sl
    if family == "PSL":
        return sl // math.gcd(n, q - 1)
    if family == "SU":
        return su
    if family == "U":
        return su * (q + 1)
    if family == "PSU":
        return su // math.gcd(n, q + 1)
    if family in ("Sp", "PSp"):
        if n % 2:
            raise ValidationError("symplectic groups need even dimension", field="n", value=n)
        m = n // 2
        sp = q ** (m * m) * math.prod(q ** (2 * i) - 1 for i in range(1, m + 1))
        return sp if family == "Sp" else sp // math.gcd(2, q - 1)
    raise ValidationError(f"unknown classical family {family!r}", field="family", value=family)


# Forms ----------------------------------------------------------------------


class FormKind(Enum):
    SYMPLECTIC = "symplectic"
    HERMITIAN = "hermitian"


@dataclass(frozen=True, eq=False)
class FormDescriptor:
    """A bilinear or sesquilinear form by its Gram matrix.

    For hermitian forms the field is F_{q^2} and conjugation is x ↦ x^q.
    """

    kind: FormKind
    field: FieldDescriptor
    gram: object
    q: Optional[int] = None

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    def conjugate(self, M):
        if self.kind is FormKind.HERMITIAN:
            return M ** self.q
        return M

    def evaluate(self, x, y):
        """form(x, y) for vectors given as galois arrays."""
        return x @ self.gram @ self.conjugate(y)

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'field': self.field.to_dict(),
            'gram': np.asarray(self.gram.view(np.ndarray)).tolist(),
            'q': self.q,
        }


def symplectic_form(m: int, field: FieldDescriptor) -> FormDescriptor:
    """Standard ω(x, y) = Σ (x_{2i-1} y_{2i} − x_{2i} y_{2i-1})."""
    gf = field.gf
    J = gf.Zeros((2 * m, 2 * m))
    minus_one = gf(field.embed_prime(-1).value)
    for i in range(m):
        J[2 * i, 2 * i + 1] = 1
        J[2 * i + 1, 2 * i] = minus_one
    return FormDescriptor(FormKind.SYMPLECTIC, field, J)


def hermitian_form(n: int, field: FieldDescriptor) -> FormDescriptor:
    """Standard h(x, y) = Σ x_i ȳ_i on F_{q^2}^n."""
    return FormDescriptor(FormKind.HERMITIAN, field, field.gf.Identity(n), q=field.base_order)


def preserves_form(g, form: FormDescriptor) -> bool:
    """True iff form(gx, gy) = form(x, y) as a matrix identity."""
    g = form.field.array(g)
    if g.shape != form.gram.shape:
        raise ValidationError("matrix and form dimensions differ", field="g", value=g.shape)
    return bool(np.array_equal(g.T @ form.gram @ form.conjugate(g), form.gram))


# Stabilizer chains ------------------------------------------------------------


@dataclass
class StabilizerChain:
    """Base, basic orbit lengths and strong generators from Schreier-Sims."""

    base: List[int]
    orbit_lengths: List[int]
    strong_generators: List[Permutation]
    group: PermutationGroup = dc_field(repr=False)

    @property
    def order(self) -> int:
        return math.prod(self.orbit_lengths)

    def contains(self, perm: Permutation) -> bool:
        return bool(self.group.contains(perm))


def schreier_sims(gens: Sequence[Permutation], degree: int) -> StabilizerChain:
    """Deterministic stabilizer chain (sympy picks the first moved point as base point)."""
    limit = get_config().budgets.certify_degree
    if degree > limit:
        raise BudgetExceededError(
            f"permutation domain of size {degree} is too large for a stabilizer chain",
            resource="certify_degree",
            limit=limit,
            requested=degree,
        )
    gens = list(gens) or [Permutation(list(range(degree)))]
    group = PermutationGroup(gens)
    group.schreier_sims()
    chain = StabilizerChain(
        base=list(group.base),
        orbit_lengths=[len(orbit) for orbit in group.basic_orbits],
        strong_generators=list(group.strong_gens),
        group=group,
    )
    if chain.order != group.order():
        raise GroupConstructionError("chain order disagrees with the group order", expected=group.order(), actual=chain.order)
    return chain


# Vector domains ---------------------------------------------------------------


def _powers(q: int, n: int) -> np.ndarray:
    return q ** np.arange(n - 1, -1, -1, dtype=np.int64)


def all_vectors(field: FieldDescriptor, n: int):
    """Nonzero vectors of F^n in index order."""
    q = field.order
    idx = np.arange(1, q ** n, dtype=np.int64)
    return field.gf((idx[:, None] // _powers(q, n)[None, :]) % q)


def vector_indices(field: FieldDescriptor, W) -> np.ndarray:
    plain = np.asarray(W.view(np.ndarray), dtype=np.int64)
    return plain @ _powers(field.order, W.shape[-1]) - 1


# Group handles ------------------------------------------------------------------


class GroupKind(Enum):
    PERMUTATION = "permutation"
    MATRIX = "matrix"


@dataclass(eq=False)
class GroupHandle:
    """A finite group given by generators.

    Permutation handles carry sympy permutations on ``range(degree)``;
    matrix handles carry galois matrices and act on the ``degree`` nonzero
    vectors of F^dim. ``certified`` is False when the domain was too large
    for a stabilizer chain, in which case ``declared_order`` stands in.
    """

    name: str
    kind: GroupKind
    generators: List
    degree: int
    field: Optional[FieldDescriptor] = None
    dim: Optional[int] = None
    form: Optional[FormDescriptor] = None
    declared_order: Optional[int] = None
    certified: bool = True
    _perms: Optional[List[Permutation]] = dc_field(default=None, repr=False)
    _chain: Optional[StabilizerChain] = dc_field(default=None, repr=False)
    _vectors: Optional[object] = dc_field(default=None, repr=False)

    # Permutation representation

    @property
    def vectors(self):
        if self._vectors is None:
            self._vectors = all_vectors(self.field, self.dim)
        return self._vectors

    def as_permutation(self, element) -> Permutation:
        if self.kind is GroupKind.PERMUTATION:
            return element
        images = self.vectors @ self.field.array(element).T
        return Permutation(vector_indices(self.field, images).tolist())

    def as_matrix(self, perm: Permutation):
        """Matrix whose action on vectors is ``perm``."""
        if self.kind is not GroupKind.MATRIX:
            raise GroupError(f"{self.name} is not a matrix group")
        basis = self.field.gf.Identity(self.dim)
        columns = [self.vectors[perm.array_form[int(i)]] for i in vector_indices(self.field, basis)]
        return self.field.gf(np.stack([np.asarray(c.view(np.ndarray)) for c in columns], axis=1))

    @property
    def perm_generators(self) -> List[Permutation]:
        if self._perms is None:
            self._perms = [self.as_permutation(g) for g in self.generators]
        return self._perms

    @property
    def perm_group(self) -> PermutationGroup:
        return self.chain().group

    def chain(self) -> StabilizerChain:
        if self._chain is None:
            if not self.certified:
                raise GroupError(f"{self.name} has no stabilizer chain (domain of {self.degree} points)")
            self._chain = schreier_sims(self.perm_generators, self.degree)
        return self._chain

    @property
    def order(self) -> int:
        if not self.certified:
            return self.declared_order
        return self.chain().order

    def contains(self, element) -> bool:
        if self.kind is GroupKind.MATRIX:
            element = self.field.array(element)
            if np.linalg.det(element) == 0:
                return False
            if self.form is not None and not preserves_form(element, self.form):
                return False
        return self.chain().contains(self.as_permutation(element))

    def identity(self):
        if self.kind is GroupKind.MATRIX:
            return self.field.gf.Identity(self.dim)
        return Permutation(list(range(self.degree)))

    def multiply(self, a, b):
        """a·b in the handle's native representation (matrices compose as a @ b)."""
        if self.kind is GroupKind.MATRIX:
            return a @ b
        return a * b

    def random_word(self, length: int, rng: np.random.Generator):
        word = self.identity()
        for choice in rng.integers(0, len(self.generators), size=length):
            word = self.multiply(word, self.generators[int(choice)])
        return word

    def elements(self) -> np.ndarray:
        """All elements as rows of array forms, sorted lexicographically."""
        budget = get_config().budgets.group_order
        if self.order > budget:
            raise BudgetExceededError(
                f"{self.name} has {self.order} elements",
                resource="group_order",
                limit=budget,
                requested=self.order,
            )
        rows = np.array(list(self.perm_group.generate(af=True)), dtype=np.int32)
        return rows[np.lexsort(rows.T[::-1])]

    def to_dict(self) -> dict:
        if self.kind is GroupKind.MATRIX:
            generators = [np.asarray(g.view(np.ndarray)).tolist() for g in self.generators]
        else:
            generators = [list(g.array_form) for g in self.generators]
        return {
            'name': self.name,
            'kind': self.kind.value,
            'degree': self.degree,
            'field': self.field.to_dict() if self.field else None,
            'form': self.form.kind.value if self.form else None,
            'generators': generators,
        }

    def __str__(self) -> str:
        return self.name


def permutation_group(name: str, gens: Sequence[Permutation], degree: Optional[int] = None) -> GroupHandle:
    degree = degree if degree is not None else max((g.size for g in gens), default=1)
    gens = [Permutation(list(g.array_form) + list(range(g.size, degree))) for g in gens]
    return GroupHandle(name=name, kind=GroupKind.PERMUTATION, generators=gens, degree=degree)


def symmetric_group(n: int) -> GroupHandle:
    return permutation_group(f"S{n}", SymmetricGroup(n).generators, n)


def alternating_group(n: int) -> GroupHandle:
    return permutation_group(f"A{n}", AlternatingGroup(n).generators, n)


def cyclic_group(m: int) -> GroupHandle:
    return permutation_group(f"Z{m}", CyclicGroup(m).generators, m)


# Classical groups -----------------------------------------------------------------


def _certify(handle: GroupHandle, expected: int, candidates: Callable[[], Iterator]) -> GroupHandle:
    """Compare chain order with ``expected``; append candidates while it falls short."""
    limit = get_config().budgets.certify_degree
    if handle.degree > limit:
        logger.warning(
            f"{handle.name}: {handle.degree} vectors exceed the certification budget ({limit}); "
            f"order taken from the closed form"
        )
        handle.certified = False
        return handle
    actual = handle.order
    if actual < expected:
        logger.info(f"{handle.name}: generators give order {actual} < {expected}, completing")
        for candidate in candidates():
            if handle.contains(candidate):
                continue
            handle.generators.append(candidate)
            handle._perms, handle._chain = None, None
            actual = handle.order
            if actual >= expected:
                break
    if actual != expected:
        raise GroupConstructionError(
            f"{handle.name}: chain order {actual} differs from the closed form {expected}",
            group=handle.name,
            expected=expected,
            actual=actual,
        )
    logger.debug(f"Certified {handle.name} of order {expected} with {len(handle.generators)} generators")
    return handle


def _basis_scalars(field: FieldDescriptor, degree: Optional[int] = None) -> List:
    """α^0, ..., α^{d-1} for a primitive α of the subfield of degree ``d``."""
    d = field.r if degree is None else degree
    gf = field.gf
    alpha = gf.primitive_element ** ((field.order - 1) // (field.p ** d - 1))
    return [alpha ** k for k in range(d)]


def symplectic_group(m: int, q: int) -> GroupHandle:
    """Sp_{2m}(q) generated by transvections along e_i and e_i + e_j."""
    if m < 1:
        raise ValidationError("half-dimension must be at least 1", field="m", value=m)

    def build() -> GroupHandle:
        field = field_of_order(q)
        gf = field.gf
        n = 2 * m
        form = symplectic_form(m, field)
        directions = [_unit(gf, n, i) for i in range(n)]
        directions += [_unit(gf, n, i) + _unit(gf, n, j) for i, j in itertools.combinations(range(n), 2)]
        gens = [_transvection(gf, form, v, c) for v in directions for c in _basis_scalars(field)]

        def candidates():
            for v in all_vectors(field, n):
                for c in field.gf.elements[1:]:
                    yield _transvection(gf, form, v, c)

        handle = GroupHandle(
            name=f"Sp({n},{q})",
            kind=GroupKind.MATRIX,
            generators=gens,
            degree=q ** n - 1,
            field=field,
            dim=n,
            form=form,
            declared_order=classical_order("Sp", n, q),
        )
        return _certify(handle, handle.declared_order, candidates)

    return memo().get_or_build("symplectic_group", build, m, q)


def _unit(gf, n: int, i: int):
    e = gf.Zeros(n)
    e[i] = 1
    return e


def _transvection(gf, form: FormDescriptor, v, c):
    """x ↦ x + c·ω(x, v)·v."""
    # ω(x, v) = x^T J v, so the matrix is I + c v (J v)^T
    Jv = form.gram @ v
    return gf.Identity(form.n) + c * (v[:, None] * Jv[None, :])


def _unitary_transvection(gf, q: int, v, a):
    """x ↦ x + a·h(x, v)·v with h(v, v) = 0 and a^q = −a."""
    return gf.Identity(v.shape[0]) + a * (v[:, None] * (v ** q)[None, :])


def _trace_zero_scalars(field: FieldDescriptor) -> List:
    """A nonzero a with a^q = −a times an F_p-basis of F_q."""
    q = field.base_order
    gf = field.gf
    if field.p == 2:
        a0 = gf(1)
    else:
        a0 = gf.primitive_element ** ((q + 1) // 2)
    return [a0 * c for c in _basis_scalars(field, field.base_degree)]


def _unitary_frames(field: FieldDescriptor, n: int, q: int) -> Iterator:
    """Matrices with orthonormal columns and determinant 1, in a fixed order."""
    vectors = all_vectors(field, n)
    norms = np.sum(vectors * vectors ** q, axis=1)
    units = vectors[norms == 1]

    def extend(columns):
        if len(columns) == n:
            M = field.gf(np.stack([np.asarray(c.view(np.ndarray)) for c in columns], axis=1))
            if np.linalg.det(M) == 1:
                yield M
            return
        for u in units:
            if all(np.sum(u * c ** q) == 0 for c in columns):
                yield from extend(columns + [u])

    yield from extend([])


def special_unitary_group(n: int, q: int, full_unitary: bool = False) -> GroupHandle:
    """SU_n(q) (or U_n(q) with ``full_unitary``) over F_{q^2}, standard hermitian form."""
    if n < 2:
        raise ValidationError("unitary groups need n >= 2", field="n", value=n)

    def build() -> GroupHandle:
        base = field_of_order(q)
        field = make_quadratic_extension(base.p, base.r)
        gf = field.gf
        form = hermitian_form(n, field)
        elements = gf.elements
        # b with b^{q+1} = -1 makes e_i + b e_j isotropic
        minus_one = gf(field.embed_prime(-1).value)
        roots = elements[elements ** (q + 1) == minus_one]
        scalars = _trace_zero_scalars(field)
        gens = []
        for i, j in itertools.combinations(range(n), 2):
            for b in roots:
                v = _unit(gf, n, i) + b * _unit(gf, n, j)
                gens.extend(_unitary_transvection(gf, q, v, a) for a in scalars)
        family = "U" if full_unitary else "SU"
        if full_unitary:
            zeta = gf.primitive_element ** (q - 1)
            D = gf.Identity(n)
            D[0, 0] = zeta
            gens.append(D)

        def candidates():
            vectors = all_vectors(field, n)
            isotropic = vectors[np.sum(vectors * vectors ** q, axis=1) == 0]
            all_a = elements[(elements ** q == -elements) & (elements != 0)]
            for v in isotropic:
                for a in all_a:
                    yield _unitary_transvection(gf, q, v, a)
            yield from _unitary_frames(field, n, q)

        handle = GroupHandle(
            name=f"{family}({n},{q})",
            kind=GroupKind.MATRIX,
            generators=gens,
            degree=field.order ** n - 1,
            field=field,
            dim=n,
            form=form,
            declared_order=classical_order(family, n, q),
        )
        return _certify(handle, handle.declared_order, candidates)

    return memo().get_or_build("unitary_group", build, n, q, full_unitary)


def special_linear_group(n: int, q: int) -> GroupHandle:
    """SL_n(q) generated by elementary matrices I + c·E_ij."""

    def build() -> GroupHandle:
        field = field_of_order(q)
        gf = field.gf
        gens = []
        for i, j in itertools.permutations(range(n), 2):
            for c in _basis_scalars(field):
                E = gf.Identity(n)
                E[i, j] = c
                gens.append(E)

        def candidates():
            for i, j in itertools.permutations(range(n), 2):
                for c in gf.elements[1:]:
                    E = gf.Identity(n)
                    E[i, j] = c
                    yield E

        handle = GroupHandle(
            name=f"SL({n},{q})",
            kind=GroupKind.MATRIX,
            generators=gens,
            degree=q ** n - 1,
            field=field,
            dim=n,
            declared_order=classical_order("SL", n, q),
        )
        return _certify(handle, handle.declared_order, candidates)

    return memo().get_or_build("special_linear_group", build, n, q)


def scalars_in(G: GroupHandle) -> List:
    """Scalar matrices λI lying in G."""
    gf = G.field.gf
    found = []
    for lam in gf.elements[1:]:
        S = gf.Identity(G.dim) * lam
        if G.contains(S):
            found.append(S)
    return found


def scalar_subgroup_order(G: GroupHandle) -> int:
    return len(scalars_in(G))


def projective_image(G: GroupHandle, field: Optional[FieldDescriptor] = None) -> GroupHandle:
    """Permutation action of a matrix group on the normalized points of P^{n-1}."""
    if G.kind is not GroupKind.MATRIX:
        raise GroupError(f"{G.name} is not a matrix group")
    field = field or G.field
    n = G.dim
    q = field.order
    points = field.gf(np.vstack([np.asarray(c.view(np.ndarray)) for c in iter_projective_chunks(n, field)]))
    lookup = np.full(q ** n, -1, dtype=np.int64)
    lookup[vector_indices(field, points) + 1] = np.arange(points.shape[0])
    gens = []
    for g in G.generators:
        images = normalize_rows(field, points @ field.array(g).T)
        gens.append(Permutation(lookup[vector_indices(field, images) + 1].tolist()))
    image = permutation_group(f"P{G.name}", gens, projective_count(n, q))
    logger.debug(f"Projective image of {G.name} on {image.degree} points")
    return image


# Weyl group of E6 -------------------------------------------------------------------

# Bourbaki labelling: 1-3-4-5-6 is a chain and 2 hangs off 4.
E6_EDGES = ((0, 2), (2, 3), (3, 4), (4, 5), (1, 3))
WEYL_E6_ORDER = 2 ** 7 * 3 ** 4 * 5


def e6_cartan_matrix() -> np.ndarray:
    A = 2 * np.eye(6, dtype=np.int64)
    for i, j in E6_EDGES:
        A[i, j] = A[j, i] = -1
    return A


def e6_roots() -> List[Tuple[int, ...]]:
    """All roots in the simple-root basis, by reflection closure."""
    A = e6_cartan_matrix()
    simple = [tuple(int(v) for v in row) for row in np.eye(6, dtype=np.int64)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            pairing = np.asarray(beta) @ A
            for i in range(6):
                image = list(beta)
                image[i] -= int(pairing[i])
                image = tuple(image)
                if image not in seen:
                    seen.add(image)
                    nxt.append(image)
        frontier = nxt
    roots = sorted(seen)
    if len(roots) != 72:
        raise GroupConstructionError("E6 root closure has the wrong size", group="W(E6)", expected=72, actual=len(roots))
    return roots


def weyl_e6() -> GroupHandle:
    """W(E6) as simple reflections permuting the 72 roots."""

    def build() -> GroupHandle:
        A = e6_cartan_matrix()
        roots = e6_roots()
        index = {r: k for k, r in enumerate(roots)}
        gens = []
        for i in range(6):
            images = []
            for beta in roots:
                image = list(beta)
                image[i] -= int((np.asarray(beta) @ A)[i])
                images.append(index[tuple(image)])
            gens.append(Permutation(images))
        handle = permutation_group("W(E6)", gens, 72)
        if handle.order != WEYL_E6_ORDER:
            raise GroupConstructionError(
                "W(E6) order mismatch",
                group="W(E6)",
                expected=WEYL_E6_ORDER,
                actual=handle.order,
            )
        return handle

    return memo().get_or_build("weyl_e6", build)


# Structure ------------------------------------------------------------------------------


def _as_permutation_handle(G: GroupHandle) -> GroupHandle:
    if G.kind is GroupKind.PERMUTATION:
        return G
    return permutation_group(G.name, G.perm_generators, G.degree)


def _check_order_budget(G: GroupHandle) -> None:
    budget = get_config().budgets.group_order
    if G.order > budget:
        raise BudgetExceededError(
            f"{G.name} of order {G.order} exceeds the group order budget",
            resource="group_order",
            limit=budget,
            requested=G.order,
        )


def derived_subgroup(G: GroupHandle) -> GroupHandle:
    """[G, G] as the normal closure of generator commutators."""
    _check_order_budget(G)
    P = _as_permutation_handle(G)
    derived = P.perm_group.derived_subgroup()
    return permutation_group(f"[{G.name},{G.name}]", derived.generators, P.degree)


def conjugacy_classes(G: GroupHandle) -> List[np.ndarray]:
    """Conjugacy classes as arrays of element indices into ``G.elements()``.

    Classes are the orbits of the conjugation action of the generators,
    found by breadth-first search over all elements.
    """
    _check_order_budget(G)
    P = _as_permutation_handle(G)
    X = P.elements()
    index: Dict[bytes, int] = {row.tobytes(): k for k, row in enumerate(X)}
    moves = []
    for g in P.perm_generators:
        ga = np.asarray(g.array_form, dtype=X.dtype)
        gi = np.argsort(ga).astype(X.dtype)
        Y = ga[X[:, gi]]
        moves.append(np.fromiter((index[row.tobytes()] for row in Y), dtype=np.int64, count=len(Y)))
    label = np.full(len(X), -1, dtype=np.int64)
    classes = []
    for start in range(len(X)):
        if label[start] >= 0:
            continue
        label[start] = len(classes)
        members, frontier = [start], [start]
        while frontier:
            nxt = []
            for k in frontier:
                for move in moves:
                    t = int(move[k])
                    if label[t] < 0:
                        label[t] = len(classes)
                        members.append(t)
                        nxt.append(t)
            frontier = nxt
        classes.append(np.array(sorted(members), dtype=np.int64))
    return classes


def is_simple(G: GroupHandle) -> bool:
    """True iff every nontrivial class generates G as a normal subgroup."""
    P = _as_permutation_handle(G)
    order = P.order
    if order == 1:
        return False
    X = P.elements()
    identity = np.arange(P.degree, dtype=X.dtype)
    for members in conjugacy_classes(P):
        rep = X[members[0]]
        if np.array_equal(rep, identity):
            continue
        closure = P.perm_group.normal_closure(Permutation(rep.tolist()))
        if closure.order() != order:
            logger.debug(f"{G.name}: class of size {len(members)} has normal closure of order {closure.order()}")
            return False
    return True


def is_transitive(G: GroupHandle, k: int = 1) -> bool:
    """k-transitivity on the permutation domain."""
    P = _as_permutation_handle(G)
    group = P.perm_group
    remaining = list(range(P.degree))
    for _ in range(k):
        if not remaining:
            return False
        orbit = group.orbit(remaining[0])
        if set(orbit) != set(remaining):
            return False
        group = group.stabilizer(remaining[0])
        remaining = remaining[1:]
    return True


def point_stabilizer(
    G: GroupHandle,
    x: Hashable,
    action: Optional[Callable[[Permutation, Hashable], Hashable]] = None,
) -> Tuple[GroupHandle, int]:
    """Stabilizer of ``x`` and the orbit length.

    Without ``action`` x is a point of the permutation domain. Otherwise
    ``action(g, y)`` must be a right action (applying g then h equals
    applying g*h) and the stabilizer is built from Schreier generators.
    """
    P = _as_permutation_handle(G)
    order = P.order
    if action is None:
        stab = P.perm_group.stabilizer(int(x))
        orbit_len = len(P.perm_group.orbit(int(x)))
        handle = permutation_group(f"{G.name}_{x}", stab.generators, P.degree)
    else:
        transversal: Dict[Hashable, Permutation] = {x: P.identity()}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for s in P.perm_generators:
                    z = action(s, y)
                    if z not in transversal:
                        transversal[z] = transversal[y] * s
                        nxt.append(z)
            frontier = nxt
        orbit_len = len(transversal)
        target = order // orbit_len
        gens: List[Permutation] = []
        current = PermutationGroup([P.identity()])
        for y, u in transversal.items():
            if current.order() == target:
                break
            for s in P.perm_generators:
                schreier = u * s * ~transversal[action(s, y)]
                if schreier.is_Identity or current.contains(schreier):
                    continue
                gens.append(schreier)
                current = PermutationGroup(gens)
                if current.order() == target:
                    break
        handle = permutation_group(f"{G.name}_x", gens or [P.identity()], P.degree)
    if orbit_len * handle.order != order:
        raise GroupConstructionError(
            "orbit-stabilizer product differs from the group order",
            group=G.name,
            expected=order,
            actual=orbit_len * handle.order,
        )
    return handle, orbit_len


def coordinate_action(perm: Permutation, point: Tuple[int, ...]) -> Tuple[int, ...]:
    """Move coordinate i to position perm(i); a right action on tuples."""
    out = [0] * len(point)
    for i, value in enumerate(point):
        out[perm.array_form[i]] = value
    return tuple(out)


# Central products ------------------------------------------------------------------------


@dataclass
class CentralProductSpec:
    """G ∘_φ H glued along central subgroups Z1 ≤ G and Z2 ≤ H via φ: Z1 → Z2."""

    G: GroupHandle
    H: GroupHandle
    Z1: List[Permutation]
    phi: Dict[Tuple[int, ...], Permutation]

    @property
    def Z2(self) -> List[Permutation]:
        return list(self.phi.values())


@dataclass
class CentralProduct:
    handle: GroupHandle
    spec: CentralProductSpec
    left_injective: bool
    right_injective: bool

    @property
    def order(self) -> int:
        return self.handle.order


def _key(p: Permutation) -> Tuple[int, ...]:
    return tuple(p.array_form)


def _verify_central(G: GroupHandle, Z: Sequence[Permutation], label: str) -> None:
    for z in Z:
        for g in G.perm_generators:
            if z * g != g * z:
                raise GroupError(f"{label} is not central in {G.name}", details={'element': list(z.array_form)})


def _verify_isomorphism(spec: CentralProductSpec) -> None:
    Z1 = spec.Z1
    keys = {_key(z) for z in Z1}
    if len(keys) != len(Z1) or set(spec.phi) != keys:
        raise GroupError("φ must be defined on exactly the elements of Z1")
    if len({_key(w) for w in spec.Z2}) != len(Z1):
        raise GroupError("φ is not injective")
    for a in Z1:
        for b in Z1:
            ab = _key(a * b)
            if ab not in keys:
                raise GroupError("Z1 is not closed under multiplication")
            if _key(spec.phi[ab]) != _key(spec.phi[_key(a)] * spec.phi[_key(b)]):
                raise GroupError("φ is not a homomorphism")


def central_product(spec: CentralProductSpec) -> CentralProduct:
    """Realize G ∘_φ H = (G × H)/{(z, φ(z)^{-1})} by its regular representation.

    Cosets are represented by the pair whose first component has the least
    array form.
    """
    G, H = spec.G, spec.H
    _verify_central(G, spec.Z1, "Z1")
    _verify_central(H, spec.Z2, "Z2")
    _verify_isomorphism(spec)
    expected = G.order * H.order // len(spec.Z1)
    budget = get_config().budgets.group_order
    if expected > budget:
        raise BudgetExceededError(
            "central product too large",
            resource="group_order",
            limit=budget,
            requested=expected,
        )

    pairs_z = [(z, ~spec.phi[_key(z)]) for z in spec.Z1]

    def canonical(g: Permutation, h: Permutation) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return min((_key(g * z), _key(h * w)) for z, w in pairs_z)

    g_elements = [Permutation(row.tolist()) for row in G.elements()]
    h_elements = [Permutation(row.tolist()) for row in H.elements()]
    cosets = sorted({canonical(g, h) for g in g_elements for h in h_elements})
    index = {c: k for k, c in enumerate(cosets)}

    def right_multiplication(a: Permutation, b: Permutation) -> Permutation:
        images = [
            index[canonical(Permutation(list(c[0])) * a, Permutation(list(c[1])) * b)]
            for c in cosets
        ]
        return Permutation(images)

    g_one, h_one = G.identity(), H.identity()
    gens = [right_multiplication(g, h_one) for g in G.perm_generators]
    gens += [right_multiplication(g_one, h) for h in H.perm_generators]
    handle = permutation_group(f"{G.name}∘{H.name}", gens, len(cosets))
    if handle.order != expected:
        raise GroupConstructionError("central product order law failed", group=handle.name, expected=expected, actual=handle.order)

    left = len({canonical(g, h_one) for g in g_elements}) == len(g_elements)
    right = len({canonical(g_one, h) for h in h_elements}) == len(h_elements)
    if not (left and right):
        raise GroupError(f"natural maps into {handle.name} are not injective")
    return CentralProduct(handle=handle, spec=spec, left_injective=left, right_injective=right)
