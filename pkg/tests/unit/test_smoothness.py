"""Tests for the Jacobian smoothness checks."""

import pytest

from rdlab.checks.smoothness import (
    check_smoothness,
    invariant_form,
    partials_are_permuted_powers,
    smoothness_control,
)
from rdlab.models.report import CheckStatus
from rdlab.utils.errors import ValidationError


def test_hermitian_partials_fix_coordinates():
    f = invariant_form("hermitian", 3, 2)
    assert partials_are_permuted_powers(f, 2) == [0, 1, 2]


def test_symplectic_partials_swap_pairs():
    assert partials_are_permuted_powers(invariant_form("symplectic", 2, 3), 3) == [1, 0]
    assert partials_are_permuted_powers(invariant_form("symplectic", 4, 2), 2) == [1, 0, 3, 2]


def test_odd_symplectic_dimension():
    with pytest.raises(ValidationError):
        invariant_form("symplectic", 3, 2)


def test_unknown_kind():
    with pytest.raises(ValidationError):
        invariant_form("orthogonal", 3, 2)


@pytest.mark.parametrize("kind,n,q", [("hermitian", 3, 2), ("symplectic", 2, 3), ("symplectic", 4, 2)])
def test_invariant_hypersurfaces_are_smooth(kind, n, q):
    report = check_smoothness(kind, n, q, tower_depth=2)
    assert report.status is CheckStatus.PASS
    assert set(report.stats['singular_counts'].values()) == {0}
    assert report.stats['truncated_at'] is None


def test_tower_scan_truncates_at_budget(lab_config):
    lab_config.budgets.projective_points = 30
    report = check_smoothness("hermitian", 3, 2, tower_depth=3)
    assert report.status is CheckStatus.EVIDENCE
    assert list(report.stats['singular_counts']) == ["2", "4"]
    assert report.stats['truncated_at'] == 3
    assert "truncated" in report.message


def test_frobenius_power_is_everywhere_singular():
    report = smoothness_control(p=3, n=3)
    assert report.status is CheckStatus.FAIL
    assert report.witness['point'].coords == (0, 0, 1)
