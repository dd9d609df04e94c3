"""Tests for generating sets, the Dress check and induction coefficients."""

from fractions import Fraction

import pytest

from burnside_induction.bqgr import bqgr
from burnside_induction.dress import (
    coefficient_action,
    generating_element,
    induction_coefficients,
    is_dress_generating,
    is_generating,
    kernel_image_cover_check,
)
from burnside_induction.exceptions import FamilyError, InfeasibleError, NotGeneratingError
from burnside_induction.gsets import (
    Family,
    GSet,
    all_family,
    cyclic_family,
    gset_of_family,
    hyper_p_set,
    parse_family_spec,
    parse_gset_spec,
    trivial_family,
)
from burnside_induction.mackey import (
    burnside_functor,
    functor_by_name,
    hom_kernel_image,
    perm_char_green_ring,
    projection_hom,
    zero_functor,
)
from burnside_induction.zlocal import GENERIC, INTEGRAL, identity


def _cyclic_set(group):
    return gset_of_family(cyclic_family(group))


class TestIsGenerating:
    def test_point_generates_integrally(self, s3):
        x = GSet(s3, [0, len(s3.lattice) - 1])
        assert is_generating(burnside_functor(s3), x, INTEGRAL).surjective

    def test_free_orbit_of_c2(self, c2):
        verdict = is_generating(burnside_functor(c2), GSet.free(c2), INTEGRAL)
        assert not verdict.surjective
        assert verdict.invariants.free_rank == 1
        assert verdict.invariants.torsion == ()

    def test_perm_char_s3_at_two(self, s3):
        x = hyper_p_set(_cyclic_set(s3), 2)
        assert is_generating(perm_char_green_ring(s3), x, 2).surjective

    def test_perm_char_s3_generic(self, s3):
        verdict = is_generating(perm_char_green_ring(s3), _cyclic_set(s3), GENERIC)
        assert verdict.surjective
        assert verdict.invariants.torsion == (2,)


class TestDressCheck:
    def test_point_is_dress_generating(self, s3):
        assert is_dress_generating(burnside_functor(s3), GSet.point(s3)).overall

    def test_free_orbit_of_c2(self, c2):
        report = is_dress_generating(burnside_functor(c2), GSet.free(c2))
        assert [v.verdict.surjective for v in report.per_prime] == [True]
        assert report.per_prime[0].gset == GSet.point(c2)
        assert not report.generic_ok
        assert not report.overall

    def test_perm_char_s3_cyclic(self, s3):
        report = is_dress_generating(perm_char_green_ring(s3), _cyclic_set(s3))
        assert report.overall
        assert report.to_dict()["overall"] is True

    @pytest.mark.slow
    def test_perm_char_a5_cyclic(self, a5):
        assert is_dress_generating(perm_char_green_ring(a5), _cyclic_set(a5)).overall

    def test_mackey_input_uses_its_quotient_ring(self, s3):
        report = is_dress_generating(perm_char_green_ring(s3).base, _cyclic_set(s3))
        assert report.subject == "A_permchar"
        assert report.overall

    @pytest.mark.parametrize("group_name", ["s3", "d4"])
    def test_ring_and_its_burnside_quotient_agree(self, request, group_name):
        group = request.getfixturevalue(group_name)
        verdicts = set()
        for name in ("burnside", "permchar", "fixed"):
            ring = functor_by_name(group, name)
            quotient = bqgr(ring).ring
            for spec in ("cyclic", "free", "point", "hyperelementary", "elementary:2"):
                x = parse_gset_spec(group, spec)
                verdict = is_dress_generating(ring, x).overall
                assert is_dress_generating(quotient, x).overall == verdict
                verdicts.add(verdict)
        assert verdicts == {True, False}

    @pytest.mark.slow
    def test_ring_and_its_burnside_quotient_agree_on_s4(self, s4):
        for name in ("burnside", "permchar", "fixed"):
            ring = functor_by_name(s4, name)
            quotient = bqgr(ring).ring
            for spec in ("cyclic", "free", "hyperelementary", "elementary:2"):
                x = parse_gset_spec(s4, spec)
                assert is_dress_generating(quotient, x).overall == is_dress_generating(ring, x).overall

    def test_short_exact_sequence(self, s3):
        burnside = burnside_functor(s3).base
        permchar = perm_char_green_ring(s3).base
        kern, image, _ = hom_kernel_image(projection_hom(burnside, permchar))
        for x in (_cyclic_set(s3), GSet.free(s3), GSet.point(s3)):
            ends = [is_dress_generating(m, x).overall for m in (kern, image)]
            if all(ends):
                assert is_dress_generating(burnside, x).overall


class TestCoverCheck:
    def test_point(self, s3):
        assert kernel_image_cover_check(burnside_functor(s3), GSet.point(s3), 2)

    def test_zero_functor(self, s3):
        for p in (2, 3):
            assert kernel_image_cover_check(zero_functor(s3), GSet.free(s3), p)

    def test_burnside_s3_cyclic(self, s3):
        for p in (2, 3):
            report = kernel_image_cover_check(burnside_functor(s3), _cyclic_set(s3), p)
            assert report.holds
            assert report.kernel_rank >= 1

    @pytest.mark.slow
    def test_burnside_s4_cyclic(self, s4):
        assert kernel_image_cover_check(burnside_functor(s4), _cyclic_set(s4), 2)


class TestGeneratingElement:
    def test_point_integral(self, s3):
        element = generating_element(burnside_functor(s3), GSet.point(s3), INTEGRAL)
        assert element.coefficients == (0, 0, 0, 1)

    def test_free_orbit_of_c2_is_infeasible(self, c2):
        with pytest.raises(InfeasibleError):
            generating_element(burnside_functor(c2), GSet.free(c2), INTEGRAL)

    def test_local_element_has_p_unit_denominators(self, s3):
        x = hyper_p_set(_cyclic_set(s3), 3)
        element = generating_element(perm_char_green_ring(s3), x, 3)
        assert all(c.denominator % 3 != 0 for c in element.coefficients)


class TestInductionCoefficients:
    def test_whole_family(self, s3):
        table = induction_coefficients(burnside_functor(s3), all_family(s3), 2)
        assert table.verified
        act = coefficient_action(table, burnside_functor(s3))
        assert all(act[i, j] == identity(4)[i, j] for i in range(4) for j in range(4))

    def test_perm_char_s3_at_three(self, s3):
        family = parse_family_spec(s3, "p-hyperelementary:3")
        table = induction_coefficients(perm_char_green_ring(s3), family, 3)
        assert table.coefficients == {0: Fraction(-1, 2), 1: Fraction(1), 2: Fraction(1, 2)}
        assert table.verified
        assert [c["class"] for c in table.to_dict()["coefficients"]] == ["C1", "C2", "C3"]

    @pytest.mark.slow
    def test_perm_char_s4_at_two(self, s4):
        family = parse_family_spec(s4, "p-hyperelementary:2")
        table = induction_coefficients(perm_char_green_ring(s4), family, 2)
        assert table.verified
        assert all(v.denominator % 2 == 1 for v in table.coefficients.values())

    def test_family_must_be_closed(self, s3):
        with pytest.raises(FamilyError):
            induction_coefficients(burnside_functor(s3), Family.generated_by(s3, [1]), 3)

    def test_not_generating(self, c2):
        with pytest.raises(NotGeneratingError):
            induction_coefficients(burnside_functor(c2), trivial_family(c2), 3)
