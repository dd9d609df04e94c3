"""Tests for tabulated Mackey functors, Green rings and homomorphisms."""

import pytest

from burnside_induction.exceptions import NonNaturalError, ShapeMismatchError
from burnside_induction.groups import Orientation, orientation_from_spec
from burnside_induction.gsets import GMap, GSet, parse_gset_spec
from burnside_induction.mackey import (
    CONTRAVARIANT,
    MackeyData,
    MackeyHom,
    burnside_functor,
    evaluate,
    fixed_point_functor,
    fixed_point_green_ring,
    functor_by_name,
    hom_kernel_image,
    identity_hom,
    is_green_module,
    perm_char_green_ring,
    projection_hom,
    scalar_hom,
    signed_pre_functor,
    structure_map,
    validate_green,
    validate_mackey,
    zero_functor,
)
from burnside_induction.zlocal import as_int_matrix


class TestEvaluate:
    def test_empty_is_zero(self, s3):
        assert evaluate(burnside_functor(s3).base, GSet(s3)).n_generators == 0

    def test_burnside_at_point(self, s3):
        value = evaluate(burnside_functor(s3).base, GSet.point(s3))
        assert value.invariants.free_rank == 4
        assert value.is_free

    def test_additive(self, s3):
        m = burnside_functor(s3).base
        s = parse_gset_spec(s3, "C2,C3")
        doubled = parse_gset_spec(s3, "C2:2,C3:2")
        assert evaluate(m, doubled).n_generators == 2 * evaluate(m, s).n_generators

    def test_perm_char_ranks(self, c2, s3):
        assert perm_char_green_ring(c2).base.values[-1].invariants.free_rank == 2
        assert perm_char_green_ring(s3).base.values[-1].invariants.free_rank == 3

    def test_structure_map_shape(self, s3):
        m = burnside_functor(s3).base
        f = GMap.to_point(GSet.free(s3))
        assert structure_map(m, f, CONTRAVARIANT).shape == (1, 4)

    def test_missing_structure_map(self, c2):
        m = zero_functor(c2)
        ind = dict(m.ind)
        ind.pop(next(iter(ind)))
        with pytest.raises(ShapeMismatchError):
            MackeyData(c2, m.values, ind, m.res)


class TestValidateMackey:
    def test_burnside_of_s3(self, s3):
        report = validate_mackey(burnside_functor(s3).base)
        assert report.ok
        assert report.checked["pullback"] > 0

    @pytest.mark.parametrize("name", ["burnside", "permchar", "fixed", "zero"])
    def test_built_in_functors_over_the_catalog(self, catalog_group, name):
        report = validate_mackey(functor_by_name(catalog_group, name).base)
        assert report.ok, report.defects[:3]

    def test_zero_functor(self, s4):
        assert validate_mackey(zero_functor(s4)).ok

    def test_fixed_point_functor(self, d4):
        assert validate_mackey(fixed_point_functor(d4)).ok

    def test_signed_with_trivial_orientation(self, s3):
        assert validate_mackey(signed_pre_functor(s3, Orientation.trivial(s3))).ok

    def test_signed_c2_reports_inner_conjugation(self, c2):
        omega = orientation_from_spec(c2, "trivial-kernel")
        report = validate_mackey(signed_pre_functor(c2, omega))
        assert not report.ok
        assert "inner-conjugation" in report.defect_kinds()
        inner = [d for d in report.defects if d.kind == "inner-conjugation"]
        assert [(d.detail["class"], d.detail["element"]) for d in inner] == [("C2", 1)]
        assert inner[0].to_dict()["matrix"] == [[-1]]

    def test_signed_inner_defects_follow_omega(self, s3):
        omega = Orientation.sign(s3)
        report = validate_mackey(signed_pre_functor(s3, omega))
        flagged = {d.detail["element"] for d in report.defects if d.kind == "inner-conjugation"}
        assert flagged == {x for x in range(s3.order) if omega(x) == -1}

    def test_signed_coset_representatives_differ_by_sign(self, c2):
        omega = orientation_from_spec(c2, "trivial-kernel")
        m = signed_pre_functor(c2, omega)
        by_element = {tm.element: m.ind[tm] for tm in m.ind if tm.source == tm.target == 0}
        assert by_element[0][0, 0] == -by_element[1][0, 0]

    def test_report_to_dict(self, c2):
        data = validate_mackey(zero_functor(c2)).to_dict()
        assert data["ok"] is True
        assert data["defects"] == []
        assert list(data["checked"]) == sorted(data["checked"])


class TestGreenRings:
    @pytest.mark.parametrize("build", [burnside_functor, perm_char_green_ring, fixed_point_green_ring])
    def test_builtin_rings_validate(self, s3, build):
        ring = build(s3)
        assert validate_green(ring).ok
        assert ring.base.report.ok

    def test_unit_is_trivial_orbit(self, s3):
        ring = burnside_functor(s3)
        assert list(ring.unit(GSet.point(s3))) == [0, 0, 0, 1]

    def test_fixed_point_is_a_burnside_module(self, s3):
        assert is_green_module(fixed_point_functor(s3), burnside_functor(s3)).ok

    def test_zero_is_a_green_ring(self, s3):
        assert validate_green(functor_by_name(s3, "zero")).ok

    def test_product_ring(self, c2):
        a = burnside_functor(c2)
        diagonal = a.product(a)
        assert validate_green(diagonal).ok
        assert diagonal.base.values[-1].n_generators == 4


class TestHomomorphisms:
    def test_identity(self, s3):
        m = burnside_functor(s3).base
        kern, image, _ = hom_kernel_image(identity_hom(m))
        assert all(v.n_generators == 0 for v in kern.values)
        assert [v.invariants for v in image.values] == [v.invariants for v in m.values]

    def test_doubling_on_c2(self, c2):
        m = burnside_functor(c2).base
        _, _, coker = hom_kernel_image(scalar_hom(m, 2))
        assert coker.values[-1].invariants.torsion == (2, 2)
        assert coker.values[-1].invariants.free_rank == 0
        assert coker.values[0].invariants.torsion == (2,)

    def test_character_map_of_s3(self, s3):
        burnside = burnside_functor(s3).base
        permchar = perm_char_green_ring(s3).base
        kern, image, coker = hom_kernel_image(projection_hom(burnside, permchar))
        assert kern.values[-1].n_generators == 1
        assert image.values[-1].invariants.free_rank == 3
        assert coker.values[-1].invariants.is_zero
        assert validate_mackey(kern).ok

    def test_non_natural_rejected(self, c2):
        m = burnside_functor(c2).base
        bad = MackeyHom(m, m, (as_int_matrix([[1]]), as_int_matrix([[1, 0], [0, 0]])))
        assert not bad.is_natural
        with pytest.raises(NonNaturalError):
            hom_kernel_image(bad)
