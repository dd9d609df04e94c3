"""Tests for Amitsur complexes, s(a) homotopies and the 2-adic pipeline."""

import pytest

from burnside_induction.amitsur import (
    amitsur_complex,
    exactness_from_surjectivity,
    homotopy_from_element,
    two_adic_pipeline,
    with_contraction,
)
from burnside_induction.burnside import burnside_ring
from burnside_induction.chains import COHOMOLOGICAL, check_exactness, repair_pseudo_complex
from burnside_induction.dress import generating_element
from burnside_induction.exceptions import CapExceededError, ConfigError, SiteMismatchError
from burnside_induction.groups import orientation_from_spec
from burnside_induction.gsets import GSet
from burnside_induction.mackey import burnside_functor, functor_by_name, signed_pre_functor
from burnside_induction.zlocal import INTEGRAL, is_zero


def _free_plus_point(group):
    return GSet(group, [0, len(group.lattice) - 1])


class TestAmitsurComplex:
    def test_simplicial_identities(self, s3):
        x = GSet(s3, [1, 2])
        complex_ = amitsur_complex(burnside_functor(s3), x, GSet.point(s3), 3)
        assert complex_.top_degree == 3
        assert [s.n_points for s in complex_.levels] == [1, 5, 25, 125]
        assert complex_.simplicial_defects() == []

    def test_mackey_functor_gives_a_complex(self, s3):
        x = GSet(s3, [1, 2])
        for variant in ("homological", COHOMOLOGICAL):
            chain = amitsur_complex(burnside_functor(s3), x, GSet.point(s3), 3, variant).chain
            assert chain.is_complex()

    def test_point_is_exact(self, s3):
        point = GSet.point(s3)
        chain = amitsur_complex(burnside_functor(s3), point, point, 3).chain
        assert check_exactness(chain).exact

    def test_free_orbit_of_c2_is_not_exact(self, c2):
        chain = amitsur_complex(burnside_functor(c2), GSet.free(c2), GSet.point(c2), 2).chain
        report = check_exactness(chain)
        assert 0 in report.nonzero_degrees
        assert report.homology[0].free_rank == 1

    def test_generating_set_is_exact(self, s3):
        x = _free_plus_point(s3)
        chain = amitsur_complex(burnside_functor(s3), x, GSet.point(s3), 2).chain
        assert check_exactness(chain).exact

    def test_degree_cap(self, s3):
        point = GSet.point(s3)
        with pytest.raises(CapExceededError):
            amitsur_complex(burnside_functor(s3), point, point, s3.limits.max_degree + 1)
        with pytest.raises(ConfigError):
            amitsur_complex(burnside_functor(s3), point, point, 0)

    def test_sets_of_another_group(self, s3, c2):
        with pytest.raises(SiteMismatchError):
            amitsur_complex(burnside_functor(s3), GSet.point(c2), GSet.point(s3), 1)

    def test_signed_pre_functor_is_a_complex_mod_two(self, c2):
        m = signed_pre_functor(c2, orientation_from_spec(c2, "trivial-kernel"))
        chain = amitsur_complex(m, GSet.free(c2), GSet.point(c2), 2).chain
        assert not chain.is_complex()
        assert chain.reduced(2).is_complex()

    def test_to_dict(self, c2):
        complex_ = amitsur_complex(burnside_functor(c2), GSet.free(c2), GSet.point(c2), 1)
        data = complex_.to_dict()
        assert data["functor"] == "burnside"
        assert [level["points"] for level in data["levels"]] == [1, 2]


class TestSurjectivityAndExactness:
    @pytest.mark.parametrize("name", ["burnside", "permchar", "fixed"])
    def test_generating_set(self, s3, name):
        result = exactness_from_surjectivity(functor_by_name(s3, name), _free_plus_point(s3))
        assert result.verdict.surjective
        assert sorted(result.homological.homology) == [0, 1, 2]
        assert sorted(result.cohomological.homology) == [0, 1, 2]
        assert result.homological.exact
        assert result.cohomological.exact
        assert result.consistent

    def test_restriction_to_a_non_generating_set(self, c2):
        result = exactness_from_surjectivity(burnside_functor(c2), GSet.free(c2))
        assert 0 in result.cohomological.nonzero_degrees

    def test_non_generating_set(self, c2):
        result = exactness_from_surjectivity(burnside_functor(c2), GSet.free(c2))
        assert not result.verdict.surjective
        assert result.consistent
        assert not result.homological.exact


class TestHomotopy:
    def test_zero_element(self, s3):
        x = _free_plus_point(s3)
        complex_ = amitsur_complex(burnside_functor(s3), x, GSet.point(s3), 2)
        h = homotopy_from_element(burnside_ring(x).zero(), complex_)
        assert all(is_zero(s) for s in h.maps)
        assert not h.contracts(complex_)

    def test_generating_element_contracts(self, s3):
        m = burnside_functor(s3)
        x = _free_plus_point(s3)
        complex_ = amitsur_complex(m, x, GSet.point(s3), 2)
        a = generating_element(m, x, INTEGRAL).element()
        h = homotopy_from_element(a, complex_)
        assert h.contracts(complex_)
        assert all(is_zero(d) for d in h.defects(complex_))

    def test_contracted_chain_needs_no_repair(self, s3):
        m = burnside_functor(s3)
        x = _free_plus_point(s3)
        complex_ = amitsur_complex(m, x, GSet.point(s3), 2)
        h = homotopy_from_element(generating_element(m, x, INTEGRAL).element(), complex_)
        result = repair_pseudo_complex(with_contraction(complex_, h))
        assert result.verified
        assert result.changed_degrees == ()

    def test_element_over_another_set(self, s3):
        complex_ = amitsur_complex(burnside_functor(s3), GSet(s3, [1, 2]), GSet.point(s3), 1)
        with pytest.raises(SiteMismatchError):
            homotopy_from_element(burnside_ring(GSet.free(s3)).unit(), complex_)


class TestTwoAdicPipeline:
    def test_signed_c2(self, c2):
        omega = orientation_from_spec(c2, "trivial-kernel")
        assert not signed_pre_functor(c2, omega).is_mackey
        result = two_adic_pipeline(c2, omega, k=3)
        assert result.repair.verified
        assert result.summand_split
        assert result.repair.chain.modulus == 8
        assert result.to_dict()["summand_split"] is True

    @pytest.mark.slow
    def test_signed_s4(self, s4):
        result = two_adic_pipeline(s4, orientation_from_spec(s4, "sign"), k=2)
        assert result.repair.verified
        assert result.summand_split

    def test_odd_prime_rejected(self, s3):
        with pytest.raises(ConfigError):
            two_adic_pipeline(s3, orientation_from_spec(s3, "sign"), p=3)
