"""Exact arithmetic in prime fields and their extensions.

Elements are stored by their integer encoding ``sum(c_i * p**i)`` where
``c_0, ..., c_{r-1}`` are the coordinates in the power basis of the modulus.
This is the same encoding galois uses for its field arrays, so vectorized
kernels can move between scalars and arrays without translation.

Plain Python integers mean one of two things, depending on where they go:

* ``FieldDescriptor(value)``, point coordinates and matrix entries take
  integer encodings in ``0..order-1``.
* Arithmetic with a ``FieldElement`` and polynomial coefficients take
  integers as multiples of 1, reduced mod p (so ``3`` is ``1`` in F_4).

The two agree below p; for prime fields they agree everywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import galois
import numpy as np

from ..core.config import get_config
from ..utils.cache import memo
from ..utils.errors import (
    BudgetExceededError,
    DivisionByZeroError,
    FieldError,
    FieldMismatchError,
    ValidationError,
)
from ..utils.logging import get_logger
from ..utils.validators import validate_positive, validate_prime

logger = get_logger(__name__)

# galois field classes keyed by (p, modulus); kept out of the descriptor so it pickles
_GALOIS_CLASSES: Dict[Tuple[int, Tuple[int, ...]], type] = {}


@dataclass(frozen=True)
class FieldDescriptor:
    """F_{p^r} given by a monic irreducible modulus (little-endian coefficients).

    ``base_degree`` is set when the field was built as the quadratic extension
    F_{q^2} of F_q with q = p**base_degree; conjugation is only defined then.
    """

    p: int
    r: int
    modulus: Tuple[int, ...]
    base_degree: Optional[int] = None

    @property
    def order(self) -> int:
        return self.p ** self.r

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_prime_field(self) -> bool:
        return self.r == 1

    @property
    def base_order(self) -> int:
        """Size q of the base field of a quadratic extension."""
        if self.base_degree is None:
            raise FieldError(f"{self} is not flagged as a quadratic extension")
        return self.p ** self.base_degree

    @property
    def gf(self) -> type:
        """The galois FieldArray class realising this descriptor."""
        key = (self.p, self.modulus)
        cls = _GALOIS_CLASSES.get(key)
        if cls is None:
            if self.r == 1:
                cls = galois.GF(self.p)
            else:
                poly = galois.Poly(list(reversed(self.modulus)), field=galois.GF(self.p))
                cls = galois.GF(self.order, irreducible_poly=poly)
            _GALOIS_CLASSES[key] = cls
        return cls

    # Scalars --------------------------------------------------------------

    def __call__(self, value: Union[int, "FieldElement"]) -> "FieldElement":
        """Coerce an integer encoding to an element (reduced mod p for prime fields)."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError("element belongs to another field", left=value.field, right=self)
            return value
        if isinstance(value, (int, np.integer)):
            value = int(value)
            if self.r == 1:
                return FieldElement(self, value % self.p)
            if not 0 <= value < self.order:
                raise FieldError(f"integer encoding {value} outside 0..{self.order - 1}")
            return FieldElement(self, value)
        raise FieldError(f"cannot coerce {type(value).__name__} into {self}")

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def from_coefficients(self, coefficients: Sequence[int]) -> "FieldElement":
        """Element from its little-endian coordinate sequence."""
        if len(coefficients) > self.r:
            raise FieldError(f"expected at most {self.r} coefficients, got {len(coefficients)}")
        value = sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coefficients))
        return FieldElement(self, value)

    def primitive_element(self) -> "FieldElement":
        return FieldElement(self, int(self.gf.primitive_element))

    def embed_prime(self, c: int) -> "FieldElement":
        """Image of the residue ``c`` of F_p."""
        return FieldElement(self, int(c) % self.p)

    # Integer-encoded kernels ----------------------------------------------

    def _add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        return int(self.gf(a) + self.gf(b))

    def _neg(self, a: int) -> int:
        if self.r == 1:
            return (-a) % self.p
        return int(-self.gf(a))

    def _mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a * b) % self.p
        return int(self.gf(a) * self.gf(b))

    def _inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZeroError(f"division by zero in {self}")
        if self.r == 1:
            return pow(a, -1, self.p)
        return int(self.gf(a) ** -1)

    def _pow(self, a: int, e: int) -> int:
        if e < 0:
            return self._pow(self._inv(a), -e)
        if self.r == 1:
            return pow(a, e, self.p)
        return int(self.gf(a) ** e)

    # Vector helpers ---------------------------------------------------------

    def array(self, values) -> galois.FieldArray:
        """galois array from integer encodings (or FieldElements)."""
        if isinstance(values, galois.FieldArray):
            if type(values) is not self.gf:
                raise FieldMismatchError("array belongs to another field")
            return values
        if isinstance(values, np.ndarray) and values.dtype != object:
            return self.gf(values.astype(np.int64))
        data = np.vectorize(int, otypes=[np.int64])(np.asarray(values, dtype=object))
        return self.gf(data)

    def to_dict(self) -> dict:
        payload = {"p": self.p, "r": self.r, "modulus": list(self.modulus)}
        if self.base_degree is not None:
            payload["base_degree"] = self.base_degree
        return payload

    def __str__(self) -> str:
        label = f"F_{self.order}"
        if self.base_degree is not None:
            label += f" over F_{self.base_order}"
        return label


@dataclass(frozen=True)
class FieldElement:
    """An element of a finite field, stored by integer encoding."""

    field: FieldDescriptor
    value: int

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    @property
    def coefficients(self) -> Tuple[int, ...]:
        """Little-endian residues in the modulus basis."""
        digits, v = [], self.value
        for _ in range(self.field.r):
            v, d = divmod(v, self.field.p)
            digits.append(d)
        return tuple(digits)

    def is_zero(self) -> bool:
        return self.value == 0

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"operands live in {self.field} and {other.field}",
                    left=self.field,
                    right=other.field,
                )
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.embed_prime(int(other)).value
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field._add(self.value, b))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.value))

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._add(self.value, self.field._neg(b)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field._mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.value, self.field._inv(b)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field._inv(self.value)) * other

    def __pow__(self, exponent: int):
        return FieldElement(self.field, self.field._pow(self.value, int(exponent)))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field._inv(self.value))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == self.field.embed_prime(int(other)).value
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.modulus, self.value))

    def to_serial(self) -> List[int]:
        return list(self.coefficients)

    def __repr__(self) -> str:
        if self.field.r == 1:
            return str(self.value)
        return "[" + ",".join(str(c) for c in self.coefficients) + "]"


# Construction ---------------------------------------------------------------

def _trial_division_certifies(p: int, coefficients: Sequence[int]) -> bool:
    """True iff no monic polynomial of degree 1..r//2 divides the candidate."""
    prime = galois.GF(p)
    candidate = galois.Poly(list(reversed(coefficients)), field=prime)
    r = len(coefficients) - 1
    for degree in range(1, r // 2 + 1):
        for lower in itertools.product(range(p), repeat=degree):
            divisor = galois.Poly([1, *lower], field=prime)
            if candidate % divisor == 0:
                return False
    return True


def least_irreducible_modulus(p: int, r: int) -> Tuple[int, ...]:
    """Lexicographically least monic irreducible of degree ``r`` over F_p.

    Candidates are scanned by integer encoding, i.e. comparing the
    highest-degree coefficient first.
    """
    if r == 1:
        return (0, 1)
    prime = galois.GF(p)
    for encoding in range(p ** r, 2 * p ** r):
        poly = galois.Poly.Int(encoding, field=prime)
        if poly.is_irreducible():
            coefficients = tuple(int(c) for c in reversed(poly.coeffs))
            if p ** (r // 2) <= 2401 and not _trial_division_certifies(p, coefficients):
                raise FieldError(f"modulus {coefficients} failed trial division over F_{p}")
            return coefficients
    raise FieldError(f"no irreducible polynomial of degree {r} over F_{p}")  # unreachable


def make_field(p: int, r: int = 1) -> FieldDescriptor:
    """Build F_{p^r} with the deterministic modulus."""
    validate_prime(p)
    validate_positive(r, "r")
    limit = get_config().budgets.field_cardinality
    if p ** r > limit:
        raise BudgetExceededError(
            f"field of size {p}^{r} exceeds the cardinality budget",
            resource="field_cardinality",
            limit=limit,
            requested=p ** r,
        )

    def build() -> FieldDescriptor:
        modulus = least_irreducible_modulus(p, r)
        logger.debug(f"Constructed F_{p ** r} with modulus {modulus}")
        return FieldDescriptor(p, r, modulus)

    return memo().get_or_build("field", build, p, r)


def make_quadratic_extension(p: int, r: int = 1) -> FieldDescriptor:
    """F_{q^2} for q = p**r, flagged so that :func:`conj` is available."""
    big = make_field(p, 2 * r)
    return FieldDescriptor(big.p, big.r, big.modulus, base_degree=r)


def field_of_order(q: int) -> FieldDescriptor:
    """Field with ``q`` elements; ``q`` must be a prime power."""
    factors = galois.factors(q) if q > 1 else ([], [])
    primes, exponents = factors
    if len(primes) != 1:
        raise ValidationError(f"{q} is not a prime power", field="q", value=q)
    return make_field(int(primes[0]), int(exponents[0]))


def tower_level(field: FieldDescriptor, m: int) -> FieldDescriptor:
    """F_{|field|^m}, sharing the characteristic of ``field``."""
    return make_field(field.p, field.r * m)


# Operations -----------------------------------------------------------------

def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` in {add, sub, mul, div} to two elements of one field."""
    if a.field != b.field:
        raise FieldMismatchError(f"descriptor mismatch: {a.field} vs {b.field}", left=a.field, right=b.field)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValidationError(f"unknown operation {op!r}", field="op", value=op)


def frobenius(a: FieldElement, k: int = 1) -> FieldElement:
    """a^(p^k)."""
    k %= a.field.r
    return a ** (a.field.p ** k)


def conj(a: FieldElement) -> FieldElement:
    """Conjugation a ↦ a^q of F_{q^2} over F_q."""
    if a.field.base_degree is None:
        raise FieldError(f"{a.field} is not flagged as a quadratic extension")
    return a ** a.field.base_order


def enumerate_elements(field: FieldDescriptor) -> List[FieldElement]:
    """All elements in integer-encoding order (0 first)."""
    return [FieldElement(field, v) for v in range(field.order)]


def subfield_elements(field: FieldDescriptor, degree: Optional[int] = None) -> List[FieldElement]:
    """Elements fixed by x ↦ x^(p^degree); defaults to the base of a quadratic extension."""
    if degree is None:
        if field.base_degree is None:
            raise FieldError(f"{field} has no declared base field")
        degree = field.base_degree
    elements = field.gf.elements
    fixed = elements[elements ** (field.p ** degree) == elements]
    return [FieldElement(field, int(v)) for v in fixed]


def norm_one_elements(field: FieldDescriptor) -> List[FieldElement]:
    """ζ in F_{q^2} with ζ^(q+1) = 1."""
    q = field.base_order
    elements = field.gf.elements
    hits = elements[elements ** (q + 1) == 1]
    return [FieldElement(field, int(v)) for v in hits]
