"""Tests for the group structure checks."""

import pytest

from rdlab.checks.groups import (
    PSP4_3_ORDER,
    central_product_specs,
    check_central_products,
    check_classical_orders,
    check_faithful_vs_free,
    check_group_facts,
    check_psl2_9,
    check_sp4_3,
    check_su4_2,
    check_weyl_sequence,
)
from rdlab.models.report import CheckStatus


def test_psl2_9():
    report = check_psl2_9()
    assert report.status is CheckStatus.PASS
    assert report.stats['degree'] == 10
    assert report.stats['order'] == 360
    assert sum(report.stats['class_sizes']) == 360
    assert report.stats['class_sizes'][0] == 1


def test_small_classical_orders():
    report = check_classical_orders(cases=(("Sp", 2, 3), ("SU", 3, 2), ("U", 3, 2)), words=5, seed=9)
    assert report.status is CheckStatus.PASS
    rows = report.stats['groups']
    assert rows['Sp(2,3)']['scalars'] == 2
    assert rows['Sp(2,3)']['projective_order'] == 12
    assert rows['SU(3,2)']['order'] == 216
    assert rows['U(3,2)']['order'] == 648
    assert report.seed == 9


def test_central_product_specs():
    specs = central_product_specs()
    assert list(specs) == ['Z4∘Z4', 'Z2×Z3', 'D8∘Z4']
    assert len(specs['Z2×Z3'].Z1) == 1


def test_central_product_order_law():
    report = check_central_products()
    assert report.status is CheckStatus.PASS
    products = report.stats['products']
    assert products['Z4∘Z4']['order'] == 8
    assert products['Z2×Z3']['order'] == 6
    assert products['D8∘Z4']['order'] == 16


def test_faithful_is_not_free():
    report = check_faithful_vs_free(n=3, q=7)
    assert report.status is CheckStatus.PASS
    assert report.stats['diagonal_elements'] == 5
    assert report.stats['hyperplane_points'] == 8
    assert report.stats['projective_kernels']['SL(2,9)'] == {'kernel': 2, 'scalars': 2}


@pytest.mark.slow
def test_weyl_sequence():
    report = check_weyl_sequence()
    assert report.status is CheckStatus.PASS
    assert report.stats['derived_order'] == PSP4_3_ORDER
    assert report.stats['index'] == 2


@pytest.mark.slow
def test_sp4_3():
    report = check_sp4_3()
    assert report.status is CheckStatus.PASS
    assert report.stats['points'] == 40


@pytest.mark.slow
def test_su4_2():
    report = check_su4_2()
    assert report.status is CheckStatus.PASS
    assert report.stats['points'] == 85


@pytest.mark.slow
def test_group_facts_bundle():
    reports = check_group_facts()
    assert [r.check_id for r in reports][:2] == ["sec2.3.psl2-9", "thm1.3.weyl-e6"]
    assert len(reports) == 7
    assert all(r.status is CheckStatus.PASS for r in reports)
