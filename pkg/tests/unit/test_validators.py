"""Tests for input validators."""

import pytest

from rdlab.utils.errors import ValidationError
from rdlab.utils.validators import (
    sanitize_filename,
    validate_check_selector,
    validate_positive,
    validate_prime,
)


@pytest.mark.parametrize("p", [2, 3, 7, 49 - 2])
def test_primes(p):
    assert validate_prime(p) == p


@pytest.mark.parametrize("p", [0, 1, 4, 49, True, "7", 7.0])
def test_non_primes(p):
    with pytest.raises(ValidationError) as exc:
        validate_prime(p, field="q")
    assert exc.value.field == "q"


def test_positive():
    assert validate_positive(3, "n", minimum=3) == 3
    with pytest.raises(ValidationError) as exc:
        validate_positive(2, "n", minimum=3)
    assert exc.value.value == 2


@pytest.mark.parametrize("selector,expected", [
    ("lem5.1d.cone-closure", "lem5.1d.cone-closure"),
    ("  Cone.*  ", "cone.*"),
    ("", "*"),
    (None, "*"),
    ("groups.[sp]*", "groups.[sp]*"),
])
def test_selectors(selector, expected):
    assert validate_check_selector(selector) == expected


@pytest.mark.parametrize("selector", ["cone closure", "rm;-rf", ".hidden", "x" * 121])
def test_bad_selectors(selector):
    with pytest.raises(ValidationError):
        validate_check_selector(selector)


@pytest.mark.parametrize("name,expected", [
    ("report-seed-42", "report-seed-42"),
    ("a/b\\c", "a_b_c"),
    ('bad<>:"|?*name', "badname"),
    ("...", "unnamed"),
    ("spaced   out", "spaced_out"),
])
def test_sanitize_filename(name, expected):
    assert sanitize_filename(name) == expected


def test_sanitize_truncates():
    assert len(sanitize_filename("x" * 300, max_length=50)) == 50
