"""Tests for Y123, Z123 and the hyperplane control."""

import numpy as np
import pytest

from rdlab.algebra.gf import make_field
from rdlab.algebra.projgeom import variety_array
from rdlab.checks.geometry import (
    all_permutations,
    check_hyperplane_control,
    stabilizer_orders,
    triangular_sample,
    y123_degree_and_dimension,
    y123_generic_freeness,
    y123_system,
    z123_construct_and_verify,
    z_representatives,
)
from rdlab.models.report import CheckStatus
from rdlab.utils.errors import ConfigurationError


def test_all_permutations():
    perms = all_permutations(4)
    assert perms.shape == (24, 4)
    assert list(perms[0]) == [0, 1, 2, 3]


def test_z_representative_subtracts_last_coordinate():
    field = make_field(3)
    Z = z_representatives(field, field.gf([[1, 2, 0, 1]]))
    assert [int(v) for v in Z[0]] == [0, 1, 2]


def test_stabilizer_orders():
    field = make_field(5)
    points = field.gf([[1, 1, 1, 1, 1], [0, 1, 2, 3, 4], [1, 0, 0, 0, 0]])
    orders = stabilizer_orders(field, points, all_permutations(5))
    # scaling by 2 permutes F_5 as a 4-cycle
    assert list(orders) == [120, 4, 24]


def test_y123_over_f2_is_the_vertex():
    field = make_field(2)
    Y = variety_array(y123_system(4, field), field)
    assert Y.shape == (1, 4)


class TestGenericFreeness:

    def test_vertex_only_is_inconclusive(self):
        report = y123_generic_freeness(4, 2)
        assert report.status is CheckStatus.INCONCLUSIVE
        assert report.stats['vertex_stabilizer'] == 24
        assert report.stats['escalation_samples'] == 0

    def test_cone_case_has_the_vertex(self, quick_sampling):
        report = y123_generic_freeness(5, 5, seed=3)
        assert report.status in (CheckStatus.EVIDENCE, CheckStatus.INCONCLUSIVE)
        assert report.stats['vertex_stabilizer'] == 120

    def test_brute_force_limit(self):
        with pytest.raises(ConfigurationError):
            y123_generic_freeness(9, 3)

    def test_escalation_must_contain_the_base(self):
        with pytest.raises(ConfigurationError):
            y123_generic_freeness(4, 2, escalation=(9,))

    @pytest.mark.slow
    def test_seven_over_f7(self):
        report = y123_generic_freeness(7, 7, escalation=(49,))
        assert report.status is not CheckStatus.FAIL
        assert report.stats['vertex_stabilizer'] == 5040
        if report.status is CheckStatus.EVIDENCE:
            assert report.witness['field'] in (7, 49)


def test_triangular_sample_lies_on_y123():
    field = make_field(5)
    points = triangular_sample(5, field, np.random.default_rng(0))
    system = y123_system(5, field)
    if points.shape[0]:
        assert system.vanishing_mask(points).all()


class TestDescent:

    def test_lines_collapse_and_action_descends(self, quick_sampling):
        report = z123_construct_and_verify(5, 5, seed=1)
        assert report.status in (CheckStatus.EVIDENCE, CheckStatus.INCONCLUSIVE)
        assert report.stats['z_points'] * 5 == report.stats['y_points_off_vertex']
        assert report.params['complement'] == "x5 = 0"

    def test_requires_the_cone_condition(self):
        with pytest.raises(ConfigurationError):
            z123_construct_and_verify(6, 5)


def test_degree_and_dimension_stay_within_bezout(quick_sampling):
    report = y123_degree_and_dimension(5, 5, tower_depth=1, trials=5, seed=2, slice_degree=1)
    assert report.status is not CheckStatus.FAIL
    if report.stats['slices'].get('max') is not None:
        assert report.stats['slices']['max'] <= 6


def test_hyperplane_control():
    report = check_hyperplane_control(4, 3)
    assert report.status is CheckStatus.EVIDENCE
    assert report.stats['projective_points'] == 40
    assert report.stats['hyperplane_points'] == 13
    assert report.stats['dimension_target'] == 2
