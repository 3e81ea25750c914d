"""Tests for group construction and structure."""

import numpy as np
import pytest
from sympy.combinatorics import Permutation

from rdlab.algebra.grouplab import (
    WEYL_E6_ORDER,
    CentralProductSpec,
    GroupKind,
    alternating_group,
    central_product,
    classical_order,
    conjugacy_classes,
    coordinate_action,
    cyclic_group,
    derived_subgroup,
    e6_roots,
    is_simple,
    is_transitive,
    point_stabilizer,
    preserves_form,
    projective_image,
    scalar_subgroup_order,
    schreier_sims,
    special_linear_group,
    special_unitary_group,
    symmetric_group,
    symplectic_group,
    weyl_e6,
)
from rdlab.utils.errors import BudgetExceededError, GroupError, ValidationError


class TestClassicalOrders:

    @pytest.mark.parametrize("family,n,q,expected", [
        ("GL", 2, 2, 6),
        ("SL", 2, 3, 24),
        ("PSL", 2, 9, 360),
        ("Sp", 4, 3, 51840),
        ("PSp", 4, 3, 25920),
        ("SU", 3, 2, 216),
        ("PSU", 4, 2, 25920),
        ("U", 2, 2, 18),
    ])
    def test_closed_forms(self, family, n, q, expected):
        assert classical_order(family, n, q) == expected

    def test_unknown_family(self):
        with pytest.raises(ValidationError):
            classical_order("O", 3, 3)

    def test_symplectic_needs_even_dimension(self):
        with pytest.raises(ValidationError):
            classical_order("Sp", 3, 2)


class TestStabilizerChains:

    def test_symmetric_group_chain(self):
        chain = schreier_sims([Permutation([1, 2, 3, 0]), Permutation([1, 0, 2, 3])], 4)
        assert chain.order == 24
        assert sorted((k for k in chain.orbit_lengths if k > 1), reverse=True) == [4, 3, 2]
        assert chain.contains(Permutation([0, 2, 1, 3]))

    def test_trivial_generators(self):
        assert schreier_sims([], 5).order == 1

    def test_domain_budget(self, lab_config):
        lab_config.budgets.certify_degree = 3
        with pytest.raises(BudgetExceededError) as exc:
            schreier_sims([Permutation([1, 0, 2, 3])], 4)
        assert exc.value.resource == "certify_degree"


class TestPermutationGroups:

    def test_small_orders(self):
        assert symmetric_group(4).order == 24
        assert alternating_group(5).order == 60
        assert cyclic_group(6).order == 6

    def test_group_kind_members_are_distinct(self):
        assert GroupKind.PERMUTATION != GroupKind.MATRIX
        assert len({GroupKind.PERMUTATION, GroupKind.MATRIX}) == 2

    def test_derived_subgroup_of_s4(self):
        assert derived_subgroup(symmetric_group(4)).order == 12

    def test_simplicity(self):
        assert is_simple(alternating_group(5))
        assert not is_simple(symmetric_group(5))
        assert not is_simple(cyclic_group(4))

    def test_conjugacy_classes_of_s4(self):
        sizes = sorted(len(c) for c in conjugacy_classes(symmetric_group(4)))
        assert sizes == [1, 3, 6, 6, 8]

    def test_transitivity(self):
        assert is_transitive(symmetric_group(5), 5)
        assert is_transitive(alternating_group(5), 3)
        assert not is_transitive(alternating_group(5), 4)

    def test_point_stabilizer(self):
        stab, orbit = point_stabilizer(symmetric_group(5), 0)
        assert orbit == 5
        assert stab.order == 24

    def test_stabilizer_under_coordinate_action(self):
        stab, orbit = point_stabilizer(symmetric_group(4), (0, 0, 1, 1), coordinate_action)
        assert orbit == 6
        assert stab.order == 4

    def test_elements_respect_budget(self, tight_budgets):
        with pytest.raises(BudgetExceededError):
            symmetric_group(5).elements()

    def test_random_words_stay_in_group(self):
        G = alternating_group(5)
        rng = np.random.default_rng(0)
        for _ in range(5):
            assert G.contains(G.random_word(10, rng))
        assert not G.contains(Permutation([1, 0, 2, 3, 4]))


class TestMatrixGroups:

    def test_sp2_3_is_sl2_3(self):
        sp = symplectic_group(1, 3)
        assert sp.order == 24
        assert scalar_subgroup_order(sp) == 2
        assert projective_image(sp).order == 12

    def test_sl_projective_image(self):
        sl = special_linear_group(2, 3)
        assert sl.order == 24
        assert projective_image(sl).degree == 4

    def test_symplectic_generators_preserve_the_form(self):
        sp = symplectic_group(2, 2)
        assert sp.order == classical_order("Sp", 4, 2)
        assert all(preserves_form(g, sp.form) for g in sp.generators)

    def test_matrix_recovered_from_its_permutation(self):
        sp = symplectic_group(1, 3)
        g = sp.generators[0]
        assert np.array_equal(sp.as_matrix(sp.as_permutation(g)), g)

    def test_membership_rejects_form_breakers(self):
        sp = symplectic_group(1, 3)
        D = sp.field.gf([[2, 0], [0, 2]])
        # -I has determinant 1 and preserves the form; diag(1, 2) does not
        assert sp.contains(D)
        assert not sp.contains(sp.field.gf([[1, 0], [0, 2]]))

    def test_special_unitary_3_2(self):
        su = special_unitary_group(3, 2)
        assert su.order == 216
        assert su.field.order == 4
        assert scalar_subgroup_order(su) == 3

    @pytest.mark.parametrize("build,order", [
        (lambda: symplectic_group(2, 3), 51840),
        (lambda: special_unitary_group(4, 2), 25920),
    ])
    def test_cited_groups_are_certified(self, build, order):
        G = build()
        assert G.certified
        assert G.chain().order == order

    @pytest.mark.slow
    def test_unitary_4_3_is_certified(self):
        G = special_unitary_group(4, 3, full_unitary=True)
        assert G.degree == 6560
        assert G.certified
        assert G.chain().order == classical_order("U", 4, 3)

    def test_default_budget_covers_the_largest_domain(self, lab_config):
        assert lab_config.budgets.certify_degree >= 9 ** 4 - 1

    def test_oversized_domain_is_left_uncertified(self, lab_config, fresh_memo):
        lab_config.budgets.certify_degree = 10
        G = special_unitary_group(3, 2)
        assert not G.certified
        assert G.order == classical_order("SU", 3, 2)
        with pytest.raises(GroupError):
            G.chain()

    def test_unitary_needs_two_dimensions(self):
        with pytest.raises(ValidationError):
            special_unitary_group(1, 2)

    def test_projective_image_needs_matrices(self):
        with pytest.raises(GroupError):
            projective_image(symmetric_group(3))


class TestWeylE6:

    def test_root_system(self):
        roots = e6_roots()
        assert len(roots) == 72
        assert sum(1 for r in roots if all(c >= 0 for c in r)) == 36

    def test_order(self):
        W = weyl_e6()
        assert W.order == WEYL_E6_ORDER == 51840
        assert W.degree == 72


class TestCentralProducts:

    def test_z4_glued_to_z4_along_z2(self):
        G, H = cyclic_group(4), cyclic_group(4)
        g, h = G.generators[0], H.generators[0]
        e = G.identity()
        spec = CentralProductSpec(
            G=G,
            H=H,
            Z1=[e, g ** 2],
            phi={tuple(e.array_form): H.identity(), tuple((g ** 2).array_form): h ** 2},
        )
        product = central_product(spec)
        assert product.order == 8
        assert product.left_injective and product.right_injective

    def test_non_central_subgroup_rejected(self):
        G = symmetric_group(3)
        t = Permutation([1, 0, 2])
        e = G.identity()
        spec = CentralProductSpec(
            G=G,
            H=cyclic_group(2),
            Z1=[e, t],
            phi={tuple(e.array_form): Permutation([0, 1]), tuple(t.array_form): Permutation([1, 0])},
        )
        with pytest.raises(GroupError):
            central_product(spec)
