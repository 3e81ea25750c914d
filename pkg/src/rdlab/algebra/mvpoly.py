"""Sparse multivariate polynomials over a finite field.

A polynomial keeps its terms as two aligned arrays: an ``(t, n)`` exponent
matrix and ``t`` coefficient encodings. Terms are kept combined, free of zero
coefficients and sorted in descending graded-lex order, so equality of two
polynomials is array equality.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.errors import EmbeddingError, FieldMismatchError, ValidationError
from ..utils.logging import get_logger
from .gf import FieldDescriptor, FieldElement, field_of_order

logger = get_logger(__name__)

Monomial = Tuple[int, ...]
Scalar = Union[int, FieldElement]


def _plain(array) -> np.ndarray:
    """Integer encodings of a galois array as a plain int64 ndarray."""
    return np.asarray(array.view(np.ndarray), dtype=np.int64)


def _code(field: FieldDescriptor, c: Scalar) -> int:
    """Encoding of a scalar; plain integers are read as prime-field residues."""
    if isinstance(c, FieldElement):
        return field(c).value
    return field.embed_prime(int(c)).value


def _combine(field: FieldDescriptor, coeffs: np.ndarray, inverse: np.ndarray, groups: int) -> np.ndarray:
    """Sum coefficient encodings that share a group index."""
    if field.r == 1:
        sums = np.zeros(groups, dtype=np.int64)
        np.add.at(sums, inverse, coeffs)
        return sums % field.p
    # addition in F_{p^r} is coordinatewise over F_p
    digits = _plain(field.gf(coeffs).vector())
    sums = np.zeros((groups, field.r), dtype=np.int64)
    np.add.at(sums, inverse, digits)
    sums %= field.p
    return _plain(field.gf.Vector(field.gf.prime_subfield(sums)))


def _canonical(field: FieldDescriptor, nvars: int, exps, coeffs) -> Tuple[np.ndarray, np.ndarray]:
    exps = np.asarray(exps, dtype=np.int64).reshape(-1, nvars)
    coeffs = np.asarray(coeffs, dtype=np.int64).reshape(-1)
    if coeffs.size == 0:
        return np.zeros((0, nvars), dtype=np.int64), coeffs
    unique, inverse = np.unique(exps, axis=0, return_inverse=True)
    summed = _combine(field, coeffs, inverse.reshape(-1), len(unique))
    keep = summed != 0
    unique, summed = unique[keep], summed[keep]
    # descending graded-lex: total degree first, then x1, x2, ...
    keys = tuple(-unique[:, j] for j in reversed(range(nvars))) + (-unique.sum(axis=1),)
    order = np.lexsort(keys)
    return unique[order], summed[order]


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables over ``field``."""

    __slots__ = ("field", "nvars", "_exps", "_coeffs")

    def __init__(self, field: FieldDescriptor, nvars: int, exps=None, coeffs=None, *, canonical: bool = False):
        if nvars < 1:
            raise ValidationError("a polynomial needs at least one variable", field="nvars", value=nvars)
        self.field = field
        self.nvars = nvars
        if exps is None:
            exps, coeffs = np.zeros((0, nvars), dtype=np.int64), np.zeros(0, dtype=np.int64)
        if not canonical:
            exps, coeffs = _canonical(field, nvars, exps, coeffs)
        self._exps = exps
        self._coeffs = coeffs

    # Constructors -------------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldDescriptor, nvars: int) -> "MultiPoly":
        return cls(field, nvars)

    @classmethod
    def constant(cls, field: FieldDescriptor, nvars: int, c: Scalar) -> "MultiPoly":
        return cls(field, nvars, np.zeros((1, nvars), dtype=np.int64), [_code(field, c)])

    @classmethod
    def variable(cls, field: FieldDescriptor, nvars: int, i: int) -> "MultiPoly":
        """The variable x_{i+1} (0-based index ``i``)."""
        row = np.zeros((1, nvars), dtype=np.int64)
        row[0, i] = 1
        return cls(field, nvars, row, [1])

    @classmethod
    def monomial(cls, field: FieldDescriptor, exponents: Sequence[int], c: Scalar = 1) -> "MultiPoly":
        return cls(field, len(exponents), [list(exponents)], [_code(field, c)])

    @classmethod
    def from_terms(cls, field: FieldDescriptor, nvars: int, terms: Mapping[Monomial, Scalar]) -> "MultiPoly":
        if not terms:
            return cls.zero(field, nvars)
        exps = [list(m) for m in terms]
        if any(len(m) != nvars for m in exps):
            raise ValidationError("monomial length differs from variable count", field="terms", value=terms)
        return cls(field, nvars, exps, [_code(field, c) for c in terms.values()])

    # Inspection ---------------------------------------------------------------

    @property
    def exponents(self) -> np.ndarray:
        return self._exps.copy()

    @property
    def coefficient_codes(self) -> np.ndarray:
        return self._coeffs.copy()

    @property
    def terms(self) -> Dict[Monomial, FieldElement]:
        return {
            tuple(int(e) for e in row): FieldElement(self.field, int(c))
            for row, c in zip(self._exps, self._coeffs)
        }

    def coefficient(self, monomial: Sequence[int]) -> FieldElement:
        hits = np.all(self._exps == np.asarray(monomial, dtype=np.int64), axis=1)
        idx = np.flatnonzero(hits)
        return FieldElement(self.field, int(self._coeffs[idx[0]]) if idx.size else 0)

    def __len__(self) -> int:
        return int(self._coeffs.size)

    def is_zero(self) -> bool:
        return self._coeffs.size == 0

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return int(self._exps.sum(axis=1).max()) if len(self) else -1

    def degrees(self) -> np.ndarray:
        return self._exps.sum(axis=1)

    @property
    def is_homogeneous(self) -> bool:
        return len(self) == 0 or bool(np.all(self.degrees() == self.degrees()[0]))

    # Arithmetic -----------------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if other.field != self.field:
            raise FieldMismatchError(
                f"polynomials over {self.field} and {other.field}; embed explicitly with lift()",
                left=self.field,
                right=other.field,
            )
        if other.nvars != self.nvars:
            raise ValidationError(
                f"variable counts differ ({self.nvars} vs {other.nvars})",
                field="nvars",
                value=other.nvars,
            )

    def _scalar(self, c: Scalar) -> int:
        return _code(self.field, c)

    def __add__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = MultiPoly.constant(self.field, self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        return MultiPoly(
            self.field,
            self.nvars,
            np.vstack([self._exps, other._exps]),
            np.concatenate([self._coeffs, other._coeffs]),
        )

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        coeffs = _plain(-self.field.gf(self._coeffs))
        return MultiPoly(self.field, self.nvars, self._exps, coeffs, canonical=True)

    def __sub__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = MultiPoly.constant(self.field, self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "MultiPoly":
        code = self._scalar(c)
        if code == 0:
            return MultiPoly.zero(self.field, self.nvars)
        coeffs = _plain(self.field.gf(self._coeffs) * self.field.gf(code))
        return MultiPoly(self.field, self.nvars, self._exps, coeffs, canonical=True)

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        if self.is_zero() or other.is_zero():
            return MultiPoly.zero(self.field, self.nvars)
        exps = (self._exps[:, None, :] + other._exps[None, :, :]).reshape(-1, self.nvars)
        gf = self.field.gf
        coeffs = _plain(gf(self._coeffs)[:, None] * gf(other._coeffs)[None, :]).reshape(-1)
        return MultiPoly(self.field, self.nvars, exps, coeffs)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "MultiPoly":
        if exponent < 0:
            raise ValidationError("negative polynomial power", field="exponent", value=exponent)
        result = MultiPoly.constant(self.field, self.nvars, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.nvars == other.nvars
            and np.array_equal(self._exps, other._exps)
            and np.array_equal(self._coeffs, other._coeffs)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.nvars, self._exps.tobytes(), self._coeffs.tobytes()))

    # Field changes ----------------------------------------------------------------

    def lift(self, field: FieldDescriptor) -> "MultiPoly":
        """The same polynomial over ``field``.

        Only coefficients from the prime subfield move between fields of one
        characteristic; anything else needs an explicit embedding.
        """
        if field == self.field:
            return self
        if field.p != self.field.p:
            raise EmbeddingError(f"cannot move a polynomial from {self.field} to {field}")
        if self.field.r > 1 and np.any(self._coeffs >= self.field.p):
            raise EmbeddingError(
                f"coefficients outside the prime subfield of {self.field}",
                details={'source': str(self.field), 'target': str(field)},
            )
        return MultiPoly(field, self.nvars, self._exps, self._coeffs, canonical=True)

    # Evaluation -------------------------------------------------------------------

    def evaluate_many(self, points) -> "np.ndarray":
        """Evaluate at every row of an ``(N, n)`` array; returns a galois array of length N."""
        X = self.field.array(points)
        if X.ndim != 2 or X.shape[1] != self.nvars:
            raise ValidationError(
                f"expected points of length {self.nvars}",
                field="points",
                value=getattr(X, "shape", None),
            )
        gf = self.field.gf
        total = gf.Zeros(X.shape[0])
        powers: Dict[Tuple[int, int], object] = {}
        for row, c in zip(self._exps, self._coeffs):
            term = gf.Ones(X.shape[0]) * gf(int(c))
            for j in np.flatnonzero(row):
                key = (int(j), int(row[j]))
                if key not in powers:
                    powers[key] = X[:, key[0]] ** key[1]
                term = term * powers[key]
            total = total + term
        return total

    def evaluate(self, point: Sequence[Scalar]) -> FieldElement:
        if len(point) != self.nvars:
            raise ValidationError(
                f"point has {len(point)} coordinates, polynomial has {self.nvars} variables",
                field="point",
                value=point,
            )
        codes = []
        for x in point:
            if isinstance(x, FieldElement) and x.field != self.field:
                raise FieldMismatchError(f"coordinate from {x.field}, polynomial over {self.field}")
            codes.append(self.field(x).value)
        value = self.evaluate_many(np.asarray([codes], dtype=np.int64))[0]
        return FieldElement(self.field, int(value))

    # Substitution -------------------------------------------------------------------

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace x_i by ``images[i]`` (all in a common ring)."""
        if len(images) != self.nvars:
            raise ValidationError(
                f"need {self.nvars} images, got {len(images)}",
                field="images",
                value=len(images),
            )
        target = images[0]
        for image in images[1:]:
            target._check(image)
        if self.is_zero():
            return MultiPoly.zero(self.field, target.nvars)
        if target.field != self.field:
            raise FieldMismatchError(f"images over {target.field}, polynomial over {self.field}")

        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i: int, e: int) -> MultiPoly:
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] if e == 1 else power(i, e - 1) * images[i]
            return powers[key]

        exps: List[np.ndarray] = []
        coeffs: List[np.ndarray] = []
        for row, c in zip(self._exps, self._coeffs):
            term = MultiPoly(self.field, target.nvars, np.zeros((1, target.nvars), dtype=np.int64), [int(c)])
            for j in np.flatnonzero(row):
                term = term * power(int(j), int(row[j]))
            exps.append(term._exps)
            coeffs.append(term._coeffs)
        return MultiPoly(self.field, target.nvars, np.vstack(exps), np.concatenate(coeffs))

    def substitute_linear(self, matrix) -> "MultiPoly":
        """f(M·y) for an ``n x k`` matrix M; the result lives in k variables."""
        M = self.field.array(matrix)
        if M.ndim != 2 or M.shape[0] != self.nvars:
            raise ValidationError(
                f"matrix must have {self.nvars} rows",
                field="matrix",
                value=getattr(M, "shape", None),
            )
        k = M.shape[1]
        eye = np.eye(k, dtype=np.int64)
        images = [MultiPoly(self.field, k, eye, _plain(M[i])) for i in range(self.nvars)]
        return self.substitute(images)

    # Calculus ---------------------------------------------------------------------------

    def partial_derivative(self, i: int) -> "MultiPoly":
        """Formal ∂/∂x_{i+1} (0-based ``i``), exponents reduced mod p as multipliers."""
        if not 0 <= i < self.nvars:
            raise ValidationError(f"variable index {i} out of range", field="i", value=i)
        mask = self._exps[:, i] % self.field.p != 0
        if not np.any(mask):
            return MultiPoly.zero(self.field, self.nvars)
        exps = self._exps[mask].copy()
        gf = self.field.gf
        multipliers = gf(exps[:, i] % self.field.p)
        coeffs = _plain(gf(self._coeffs[mask]) * multipliers)
        exps[:, i] -= 1
        return MultiPoly(self.field, self.nvars, exps, coeffs)

    def gradient(self) -> List["MultiPoly"]:
        return [self.partial_derivative(i) for i in range(self.nvars)]

    # Rendering -----------------------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for row, c in zip(self._exps, self._coeffs):
            factors = [
                f"x{j + 1}" if e == 1 else f"x{j + 1}^{e}"
                for j, e in enumerate(row) if e
            ]
            coefficient = repr(FieldElement(self.field, int(c)))
            if not factors:
                parts.append(coefficient)
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([coefficient, *factors]))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.field}, n={self.nvars}: {self})"

    def to_dict(self) -> dict:
        return {
            "field": self.field.to_dict(),
            "nvars": self.nvars,
            "text": str(self),
        }


# Named polynomials -------------------------------------------------------------------------


def _resolve_field(q: int, field: Optional[FieldDescriptor]) -> FieldDescriptor:
    if field is None:
        return field_of_order(q)
    return field


def elementary_symmetric(n: int, j: int, field: FieldDescriptor) -> MultiPoly:
    """s_j(x_1, ..., x_n): the sum of all products of j distinct variables."""
    if not 1 <= j <= n:
        raise ValidationError(f"degree {j} outside 1..{n}", field="j", value=j)
    rows = []
    for subset in itertools.combinations(range(n), j):
        row = [0] * n
        for i in subset:
            row[i] = 1
        rows.append(row)
    return MultiPoly(field, n, rows, np.ones(len(rows), dtype=np.int64))


def power_sum(n: int, k: int, field: FieldDescriptor) -> MultiPoly:
    rows = np.eye(n, dtype=np.int64) * k
    return MultiPoly(field, n, rows, np.ones(n, dtype=np.int64))


def symplectic_form_poly(m: int, q: int, field: Optional[FieldDescriptor] = None) -> MultiPoly:
    """ω(x, x^q) = Σ_i (x_{2i-1} x_{2i}^q − x_{2i} x_{2i-1}^q) in 2m variables over F_q."""
    if m < 1:
        raise ValidationError("half-dimension must be at least 1", field="m", value=m)
    field = _resolve_field(q, field)
    n = 2 * m
    rows, coeffs = [], []
    minus_one = field.embed_prime(-1).value
    for i in range(m):
        a, b = 2 * i, 2 * i + 1
        row = [0] * n
        row[a], row[b] = 1, q
        rows.append(row)
        coeffs.append(1)
        row = [0] * n
        row[a], row[b] = q, 1
        rows.append(row)
        coeffs.append(minus_one)
    poly = MultiPoly(field, n, rows, coeffs)
    assert poly.is_homogeneous and poly.degree == q + 1
    return poly


def hermitian_norm_poly(n: int, q: int, field: Optional[FieldDescriptor] = None) -> MultiPoly:
    """h(x, x) = x_1^{q+1} + ... + x_n^{q+1}; coefficients in the prime field."""
    if n < 1:
        raise ValidationError("need at least one variable", field="n", value=n)
    field = _resolve_field(q, field)
    return power_sum(n, q + 1, field)


def linear_substitute(f: MultiPoly, g) -> MultiPoly:
    """f(g·x) for a square matrix g over the field of f."""
    G = f.field.array(g)
    if G.ndim != 2 or G.shape != (f.nvars, f.nvars):
        raise ValidationError(
            f"expected a {f.nvars}x{f.nvars} matrix",
            field="g",
            value=getattr(G, "shape", None),
        )
    return f.substitute_linear(G)


def affine_shift_expand(s: MultiPoly) -> MultiPoly:
    """s(αx_1 + β, ..., αx_n + β) in n + 2 variables; α, β are the last two."""
    n = s.nvars
    k = n + 2
    images = []
    for i in range(n):
        alpha_x = np.zeros(k, dtype=np.int64)
        alpha_x[i] = 1
        alpha_x[n] = 1
        beta = np.zeros(k, dtype=np.int64)
        beta[n + 1] = 1
        images.append(MultiPoly(s.field, k, [alpha_x, beta], [1, 1]))
    return s.substitute(images)


def extend_variables(f: MultiPoly, nvars: int) -> MultiPoly:
    """View f as a polynomial in ``nvars`` ≥ f.nvars variables (new ones appended)."""
    if nvars < f.nvars:
        raise ValidationError("cannot drop variables", field="nvars", value=nvars)
    pad = np.zeros((len(f), nvars - f.nvars), dtype=np.int64)
    return MultiPoly(f.field, nvars, np.hstack([f.exponents, pad]), f.coefficient_codes, canonical=True)


def partial_derivative(f: MultiPoly, i: int) -> MultiPoly:
    """∂f/∂x_i with variables numbered 1..n; the method form counts from 0."""
    if not 1 <= i <= f.nvars:
        raise ValidationError(f"variable index {i} outside 1..{f.nvars}", field="i", value=i)
    return f.partial_derivative(i - 1)


def evaluate(f: MultiPoly, point: Sequence[Scalar]) -> FieldElement:
    return f.evaluate(point)


def permutation_matrix(perm: Iterable[int], field: FieldDescriptor) -> np.ndarray:
    """Matrix P with (P·x)_i = x_{perm[i]}."""
    perm = list(perm)
    P = np.zeros((len(perm), len(perm)), dtype=np.int64)
    for i, j in enumerate(perm):
        P[i, j] = 1
    return field.gf(P)
