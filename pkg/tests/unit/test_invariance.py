"""Tests for form invariance under the symplectic and unitary groups."""

import numpy as np
import pytest

from rdlab.algebra.gf import make_quadratic_extension
from rdlab.checks.invariance import (
    check_symplectic_invariance,
    check_unitary_invariance,
    evaluation_matrix,
    min_vanishing_degree,
    symplectic_invariance_control,
    unitary_invariance_control,
)
from rdlab.models.report import CheckStatus
from rdlab.utils.errors import BudgetExceededError


class TestSymplecticInvariance:

    @pytest.mark.parametrize("m,q", [(1, 2), (1, 3), (2, 2)])
    def test_form_is_invariant(self, m, q):
        report = check_symplectic_invariance(m, q, extra_random_words=10, seed=5)
        assert report.status is CheckStatus.PASS
        assert report.stats['degree'] == q + 1
        assert report.seed == 5

    def test_non_symplectic_matrix_moves_the_form(self):
        report = symplectic_invariance_control()
        assert report.status is CheckStatus.FAIL
        assert report.witness['delta'] != "0"


class TestUnitaryInvariance:

    def test_hermitian_norm_is_invariant(self):
        report = check_unitary_invariance(2, 2, extra_random_words=10, seed=1)
        assert report.status is CheckStatus.PASS
        assert report.stats['delta_degree_bound'] == 3
        assert report.stats['minimal_vanishing_degree'] == 5
        assert report.stats['pointwise_route'].startswith("vanishes")

    def test_pointwise_route_is_skipped_over_budget(self, lab_config):
        lab_config.budgets.projective_points = 5
        report = check_unitary_invariance(2, 3, extra_random_words=2, seed=1)
        assert report.status is CheckStatus.PASS
        assert report.stats['pointwise_route'].startswith("skipped")

    def test_uncertified_group_gives_evidence(self, lab_config, fresh_memo):
        lab_config.budgets.certify_degree = 10
        report = check_unitary_invariance(3, 2, extra_random_words=5, seed=1)
        assert report.status is CheckStatus.EVIDENCE
        assert report.stats['certified'] is False
        assert "not certified" in report.message

    def test_uncertified_symplectic_group_gives_evidence(self, lab_config, fresh_memo):
        lab_config.budgets.certify_degree = 2
        report = check_symplectic_invariance(1, 3, extra_random_words=5, seed=1)
        assert report.status is CheckStatus.EVIDENCE
        assert report.stats['certified'] is False

    def test_primitive_diagonal_is_not_unitary(self):
        report = unitary_invariance_control(n=2, q=3)
        assert report.status is CheckStatus.FAIL
        assert report.witness['point'] is not None


class TestMinimalVanishingDegree:

    @pytest.mark.parametrize("n", [2, 3])
    def test_least_degree_is_q_squared_plus_one(self, n):
        report = min_vanishing_degree(n, 2)
        assert report.status is CheckStatus.PASS
        assert report.stats['min_degree'] == 5
        assert report.witness['named_form']['vanishes']

    def test_ranks_below_the_threshold_are_full(self):
        report = min_vanishing_degree(2, 2)
        for d in range(1, 5):
            assert report.stats['ranks'][d]['rank'] == d + 1

    def test_truncated_search_fails(self):
        report = min_vanishing_degree(2, 2, max_degree=3)
        assert report.status is CheckStatus.FAIL
        assert set(report.stats['ranks']) == {1, 2, 3}

    def test_linear_algebra_budget(self, lab_config):
        lab_config.budgets.linear_algebra_entries = 10
        with pytest.raises(BudgetExceededError):
            min_vanishing_degree(3, 2)

    def test_evaluation_matrix(self):
        field = make_quadratic_extension(2)
        points = field.gf([[1, 0], [1, 2]])
        exponents = np.array([[2, 0], [1, 1], [0, 2]])
        E = evaluation_matrix(points, exponents)
        assert E.shape == (2, 3)
        assert [int(v) for v in E[0]] == [1, 0, 0]
        assert int(E[1, 2]) == int(field.gf(2) ** 2)
