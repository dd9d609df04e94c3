"""Tests for the Burnside ideal I_M and the quotient ring A_M."""

import pytest

from burnside_induction.bqgr import bqgr, ideal_contains, ideal_I_M, image_of_unit_map, unit_map
from burnside_induction.burnside import burnside_ring
from burnside_induction.exceptions import NotMackeyError
from burnside_induction.groups import orientation_from_spec
from burnside_induction.gsets import GSet, parse_gset_spec, product
from burnside_induction.mackey import (
    burnside_functor,
    character_kernel,
    fixed_point_green_ring,
    is_green_module,
    perm_char_green_ring,
    signed_pre_functor,
    zero_functor,
    zero_green_ring,
)
from burnside_induction.zlocal import lattices_equal


class TestIdeal:
    def test_burnside_ideal_vanishes_over_the_catalog(self, catalog_group):
        data = bqgr(burnside_functor(catalog_group))
        assert all(ideal.shape[1] == 0 for ideal in data.ideals)
        assert ideal_I_M(data.functor, GSet.point(catalog_group)).shape[1] == 0

    def test_burnside_ideal_vanishes(self, s3):
        a = burnside_functor(s3)
        for s in (GSet.point(s3), GSet.free(s3), parse_gset_spec(s3, "C2,C3")):
            assert ideal_I_M(a, s).shape[1] == 0

    def test_zero_functor_ideal_is_everything(self, s3):
        site = parse_gset_spec(s3, "C2,e")
        assert ideal_I_M(zero_functor(s3), site).shape[1] == burnside_ring(site).rank

    def test_perm_char_ideal_is_character_kernel(self, s3):
        ideal = ideal_I_M(perm_char_green_ring(s3), GSet.point(s3))
        assert ideal.shape[1] == 1
        assert lattices_equal(ideal, character_kernel(s3, len(s3.lattice) - 1))

    def test_monotone_along_quotients(self, s4):
        point = GSet.point(s4)
        burnside = ideal_I_M(burnside_functor(s4), point)
        permchar = ideal_I_M(perm_char_green_ring(s4), point)
        everything = ideal_I_M(zero_functor(s4), point)
        assert ideal_contains(permchar, burnside)
        assert ideal_contains(everything, permchar)

    def test_pre_functor_refused(self, c2):
        signed = signed_pre_functor(c2, orientation_from_spec(c2, "trivial-kernel"))
        with pytest.raises(NotMackeyError):
            ideal_I_M(signed, GSet.point(c2))


class TestBQGR:
    def test_burnside_quotient_is_itself(self, s3):
        data = bqgr(burnside_functor(s3))
        assert data.ideal_ranks() == [0, 0, 0, 0]

    def test_zero_functor_gives_zero_ring(self, s3):
        data = bqgr(zero_functor(s3))
        assert all(v.invariants.is_zero for v in data.ring.base.values)

    def test_perm_char_rank(self, s3):
        data = bqgr(perm_char_green_ring(s3))
        assert data.ring.base.values[-1].invariants.free_rank == 3
        assert data.ring.report.ok

    def test_functor_is_a_module_over_its_quotient(self, s3):
        m = perm_char_green_ring(s3)
        assert is_green_module(m.base, bqgr(m).ring).ok

    def test_ideal_at_other_sites(self, s3):
        data = bqgr(fixed_point_green_ring(s3))
        site = parse_gset_spec(s3, "C2,C3")
        assert lattices_equal(data.ideal_at(site), ideal_I_M(data.functor, site))
        assert data.to_dict(site)["site"]["burnside_rank"] == burnside_ring(site).rank

    def test_pairwise_product_sites_are_cached(self, s3):
        data = bqgr(perm_char_green_ring(s3))
        site = product(GSet.transitive(s3, 1), GSet.transitive(s3, 2)).gset
        first = data.ideal_at(site)
        assert data.ideal_at(site) is first
        assert lattices_equal(first, ideal_I_M(data.functor, site))


class TestImageOfUnitMap:
    def test_burnside(self, s3):
        image = image_of_unit_map(burnside_functor(s3))
        assert [v.n_generators for v in image.base.values] == [1, 2, 2, 4]

    def test_perm_char_is_everything(self, s3):
        image = image_of_unit_map(perm_char_green_ring(s3))
        assert image.base.values[-1].invariants.free_rank == 3

    def test_diagonal_sublattice(self, c2):
        a = burnside_functor(c2)
        square = a.product(a)
        image = image_of_unit_map(square)
        assert [v.n_generators for v in image.base.values] == [1, 2]
        top = unit_map(square)[-1]
        assert [list(row) for row in top[:2]] == [list(row) for row in top[2:]]

    @pytest.mark.parametrize("build", [burnside_functor, perm_char_green_ring, fixed_point_green_ring, zero_green_ring])
    def test_matches_quotient_ring(self, s3, build):
        g = build(s3)
        image = image_of_unit_map(g)
        quotient = bqgr(g).ring
        assert [v.invariants for v in image.base.values] == [
            v.invariants for v in quotient.base.values
        ]
