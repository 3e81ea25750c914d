"""Tests for the cone condition, the shift identities and cone closure."""

import math

import pytest

from rdlab.checks.cone import (
    check_cone_closure,
    check_lucas_table,
    check_shift_identities,
    cone_closure_control,
    cone_condition,
    cone_condition_control,
    integer_shift_residuals,
    is_prime_power_of,
    lucas_binomial,
)
from rdlab.models.report import CheckStatus
from rdlab.utils.errors import ConfigurationError, ValidationError


class TestLucas:

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_matches_direct_binomials(self, p):
        for n in range(40):
            for k in range(n + 1):
                assert lucas_binomial(n, k, p) == math.comb(n, k) % p

    def test_out_of_range_k(self):
        assert lucas_binomial(5, 7, 3) == 0
        assert lucas_binomial(5, -1, 3) == 0

    def test_rejects_composite_modulus(self):
        with pytest.raises(ValidationError):
            lucas_binomial(10, 3, 6)

    @pytest.mark.parametrize("n,p,holds", [
        (4, 2, True),
        (8, 2, True),
        (6, 2, False),
        (3, 3, False),
        (9, 3, True),
        (5, 5, True),
        (7, 7, True),
        (10, 7, False),
    ])
    def test_cone_condition(self, n, p, holds):
        assert cone_condition(n, p) is holds

    def test_prime_power_of(self):
        assert is_prime_power_of(8, 2)
        assert is_prime_power_of(1, 3)
        assert not is_prime_power_of(12, 2)
        assert not is_prime_power_of(0, 2)
        assert is_prime_power_of(49, 7)
        assert not is_prime_power_of(9, 2)
        assert not is_prime_power_of(18, 3)

    def test_table_report(self):
        report = check_lucas_table(n_max=32)
        assert report.status is CheckStatus.PASS
        assert report.stats['cone_condition_holds_for']['2'] == [4, 8, 12, 16, 20, 24, 28, 32]
        assert report.stats['cone_condition_holds_for']['3'] == [9, 18, 27]

    def test_control_reports_residues(self):
        report = cone_condition_control()
        assert report.status is CheckStatus.FAIL
        assert report.witness['residues'] == {'1': 0, '2': 1, '3': 0}


class TestShiftIdentities:

    def test_integer_residuals_vanish(self):
        assert all(r.is_zero for r in integer_shift_residuals(5))

    def test_identities_hold_for_n_4(self):
        report = check_shift_identities(4)
        assert report.status is CheckStatus.PASS
        assert report.stats['cone_condition'] == {'2': True, '3': False, '5': False, '7': False, '65537': False}

    def test_bare_constant_variant_only_survives_when_the_constant_vanishes(self):
        report = check_shift_identities(4, primes=(2, 3))
        assert report.stats['s3_variant_without_beta_cubed_is_identity'] == {'2': True, '3': False}

    @pytest.mark.parametrize("n", [2, 19])
    def test_range_is_enforced(self, n):
        with pytest.raises(ValidationError):
            check_shift_identities(n)


class TestConeClosure:

    @pytest.mark.parametrize("n,q", [(4, 2), (8, 2), (4, 4), (5, 5)])
    def test_closure_holds(self, n, q):
        report = check_cone_closure(n, q)
        assert report.status is CheckStatus.PASS
        assert report.stats['shifts'] == q * q
        assert report.stats['affine_points'] >= 1

    @pytest.mark.parametrize("n,q", [(6, 2), (3, 3), (10, 5)])
    def test_closure_requires_the_cone_condition(self, n, q):
        with pytest.raises(ConfigurationError):
            check_cone_closure(n, q)

    def test_control_finds_a_witness(self):
        report = cone_closure_control(6, 5)
        assert report.status is CheckStatus.FAIL
        assert set(report.witness) == {'point', 'alpha', 'beta'}
        assert int(report.witness['alpha']) != 0 or int(report.witness['beta']) != 0
