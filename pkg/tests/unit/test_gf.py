"""Tests for finite-field arithmetic."""

import itertools

import pytest

from rdlab.algebra.gf import (
    arith,
    conj,
    enumerate_elements,
    field_of_order,
    frobenius,
    make_field,
    make_quadratic_extension,
    norm_one_elements,
    subfield_elements,
    tower_level,
)
from rdlab.utils.errors import (
    BudgetExceededError,
    DivisionByZeroError,
    FieldError,
    FieldMismatchError,
    ValidationError,
)

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3)]


class TestFieldConstruction:

    @pytest.mark.parametrize("p,r,modulus", [
        (2, 2, (1, 1, 1)),
        (3, 2, (1, 0, 1)),
        (7, 2, (1, 0, 1)),
        (2, 3, (1, 1, 0, 1)),
    ])
    def test_least_irreducible_modulus(self, p, r, modulus):
        assert make_field(p, r).modulus == modulus

    def test_prime_field_modulus_is_linear(self):
        field = make_field(5)
        assert field.modulus == (0, 1)
        assert field.order == 5
        assert field.is_prime_field

    def test_field_of_order(self):
        field = field_of_order(49)
        assert (field.p, field.r) == (7, 2)

    @pytest.mark.parametrize("q", [1, 6, 12, 100])
    def test_field_of_order_rejects_non_prime_powers(self, q):
        with pytest.raises(ValidationError):
            field_of_order(q)

    def test_make_field_rejects_composite_characteristic(self):
        with pytest.raises(ValidationError):
            make_field(4)

    def test_cardinality_budget(self, tight_budgets):
        with pytest.raises(BudgetExceededError) as exc:
            make_field(2, 7)
        assert exc.value.resource == "field_cardinality"

    def test_tower_level(self):
        assert tower_level(make_field(7), 2).order == 49
        assert tower_level(make_field(2, 2), 2).order == 16

    def test_descriptor_is_memoized(self):
        assert make_field(3, 2) is make_field(3, 2)


class TestFieldLaws:
    """Field axioms checked exhaustively on small fields."""

    @pytest.mark.parametrize("p,r", SMALL_FIELDS)
    def test_distributive_and_commutative(self, p, r):
        elements = enumerate_elements(make_field(p, r))
        for a, b, c in itertools.product(elements, repeat=3):
            assert a * (b + c) == a * b + a * c
            assert a * b == b * a

    @pytest.mark.parametrize("p,r", SMALL_FIELDS)
    def test_inverses(self, p, r):
        field = make_field(p, r)
        for a in enumerate_elements(field)[1:]:
            assert a * a.inverse() == field.one
            assert a - a == field.zero

    def test_f4_generator_squares_to_its_successor(self):
        field = make_field(2, 2)
        x = field(2)
        assert x * x == x + 1

    def test_division_by_zero(self):
        field = make_field(5)
        with pytest.raises(DivisionByZeroError):
            field(3) / field(0)

    def test_mixed_fields_rejected(self):
        with pytest.raises(FieldMismatchError):
            make_field(2, 2)(1) + make_field(3)(1)
        with pytest.raises(FieldMismatchError):
            arith(make_field(2)(1), make_field(3)(1), "add")

    def test_unknown_operation(self):
        field = make_field(3)
        with pytest.raises(ValidationError):
            arith(field(1), field(2), "pow")

    def test_coefficients_roundtrip(self):
        field = make_field(3, 2)
        a = field.from_coefficients([2, 1])
        assert a.coefficients == (2, 1)
        assert a.value == 2 + 1 * 3

    def test_encoding_out_of_range(self):
        with pytest.raises(FieldError):
            make_field(2, 2)(4)

    def test_integers_as_encodings_and_as_multiples_of_one(self):
        from rdlab.algebra.mvpoly import MultiPoly

        f4 = make_field(2, 2)
        assert f4(3).coefficients == (1, 1)
        assert f4.one * 3 == f4.one
        assert f4.zero + 2 == f4.zero
        constant = MultiPoly.constant(f4, 1, 3)
        assert constant.evaluate([f4.zero]) == f4.one
        f7 = make_field(7)
        assert f7(10) == f7.one * 10 == f7(3)


class TestFrobeniusAndConjugation:

    @pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3)])
    def test_frobenius_has_order_r(self, p, r):
        for a in enumerate_elements(make_field(p, r)):
            image = a
            for _ in range(r):
                image = frobenius(image)
            assert image == a
            assert frobenius(a) == a ** p

    def test_conjugation_is_an_involution_with_norm_in_base(self):
        field = make_quadratic_extension(3)
        base = set(subfield_elements(field))
        assert len(base) == 3
        for a in enumerate_elements(field):
            assert conj(conj(a)) == a
            assert a * conj(a) in base

    def test_conjugation_requires_quadratic_flag(self):
        with pytest.raises(FieldError):
            conj(make_field(3, 2)(4))

    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    def test_norm_one_group_has_q_plus_one_elements(self, q):
        base = field_of_order(q)
        field = make_quadratic_extension(base.p, base.r)
        assert len(norm_one_elements(field)) == q + 1
