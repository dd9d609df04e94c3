"""Tests for G-sets, G-maps, pullbacks and families."""

import numpy as np
import pytest

from burnside_induction.exceptions import FamilyError, GroupSpecError, SiteMismatchError
from burnside_induction.groups import o_p
from burnside_induction.gsets import (
    Family,
    GMap,
    GSet,
    all_family,
    all_gmaps,
    coproduct,
    cyclic_family,
    family_of,
    gset_of_family,
    hyper_p_closure,
    hyper_p_set,
    parse_family_spec,
    parse_gmap_spec,
    parse_gset_spec,
    product,
    pullback,
    transitive_maps,
    trivial_family,
)

# S3 classes in canonical order
E, C2, C3, TOP = 0, 1, 2, 3


class TestGSet:
    def test_point_and_free(self, s3):
        assert len(GSet.point(s3)) == 1
        assert len(GSet.free(s3)) == 6

    def test_action_is_a_left_action(self, s3):
        s = GSet(s3, [C2, C3, E])
        action = s.action
        for a in range(s3.order):
            for b in range(s3.order):
                assert np.array_equal(action[s3.mul(a, b)], action[a][action[b]])

    def test_orbit_types_and_describe(self, s3):
        s = parse_gset_spec(s3, "C2:2,C3")
        assert s.orbit_types() == [(C2, 2), (C3, 1)]
        assert s.describe() == "2*G/C2 + G/C3"
        assert GSet(s3).describe() == "empty"

    def test_from_action_recovers_orbits(self, s3):
        s = GSet(s3, [C2, C3])
        decomposition = GSet.from_action(s3, s.action)
        assert decomposition.gset == s

    def test_bad_multiplicity(self, s3):
        with pytest.raises(GroupSpecError):
            parse_gset_spec(s3, "C2:0")


class TestGMaps:
    def test_no_map_from_point_to_free(self, s3):
        assert all_gmaps(GSet.point(s3), GSet.free(s3)) == []

    def test_single_map_to_point(self, s3):
        assert len(all_gmaps(GSet.transitive(s3, C2), GSet.point(s3))) == 1

    def test_free_to_c2_has_three_maps(self, s3):
        maps = all_gmaps(GSet.free(s3), GSet.transitive(s3, C2))
        assert len(maps) == 3
        assert len({tuple(f.point_map) for f in maps}) == 3

    def test_point_map_is_equivariant(self, s4):
        source = GSet.transitive(s4, 0)
        for f in all_gmaps(source, parse_gset_spec(s4, "C2.1,C3")):
            pm = f.point_map
            assert all(
                np.array_equal(pm[source.action[g]], f.target.action[g][pm]) for g in range(s4.order)
            )

    def test_compose_with_identity(self, s3):
        f = all_gmaps(GSet.free(s3), GSet.transitive(s3, C2))[1]
        assert f.compose(GMap.identity(f.source)) == f
        assert GMap.identity(f.target).compose(f) == f

    def test_non_canonical_representative_rejected(self, s3):
        with pytest.raises(SiteMismatchError):
            GMap(GSet.point(s3), GSet.free(s3), ((0, 0),))

    def test_representative_is_least_in_its_double_coset(self, d4):
        lattice = d4.lattice
        for tm in transitive_maps(d4):
            h, k = lattice.rep(tm.source), lattice.rep(tm.target)
            double = {d4.mul(d4.mul(a, tm.element), b) for a in h.elements for b in k.elements}
            assert tm.element == min(double)

    def test_map_spec(self, s3):
        f = parse_gmap_spec(s3, "e->C2@0")
        assert f.source == GSet.free(s3)
        assert f.target == GSet.transitive(s3, C2)


class TestPullback:
    def test_over_point_is_product(self, s3):
        s, t = GSet.transitive(s3, C2), GSet.transitive(s3, C3)
        p = product(s, t)
        assert len(p.gset) == len(s) * len(t)
        assert p.gset.instances == (E,)

    def test_identity_pullback(self, s3):
        s = parse_gset_spec(s3, "C2,C3")
        p = pullback(GMap.identity(s), GMap.identity(s))
        assert p.gset == s

    def test_projections_commute(self, s4):
        d4 = s4.lattice.class_by_name("H8")
        f = all_gmaps(GSet.transitive(s4, 1), GSet.transitive(s4, d4))[0]
        g = all_gmaps(GSet.transitive(s4, 2), GSet.transitive(s4, d4))[-1]
        p = pullback(f, g)
        assert np.array_equal(f.point_map[p.left.point_map], g.point_map[p.right.point_map])
        assert len(p.gset) == int(np.sum(f.point_map[:, None] == g.point_map[None, :]))

    def test_pair_index(self, c2):
        p = product(GSet.free(c2), GSet.free(c2))
        points = {p.index(s, u) for s in range(2) for u in range(2)}
        assert points == set(range(4))

    def test_target_mismatch(self, s3):
        f = GMap.identity(GSet.free(s3))
        g = GMap.identity(GSet.point(s3))
        with pytest.raises(SiteMismatchError):
            pullback(f, g)

    def test_coproduct_embeddings(self, s3):
        union, e1, e2 = coproduct(GSet.transitive(s3, C3), GSet.transitive(s3, C2))
        assert union.instances == (C2, C3)
        assert set(e1.point_map) | set(e2.point_map) == set(range(len(union)))


class TestFamilies:
    def test_all_family_is_the_point(self, s3):
        assert gset_of_family(all_family(s3)) == GSet.point(s3)

    def test_trivial_family_of_c2(self, c2):
        assert gset_of_family(trivial_family(c2)) == GSet.free(c2)

    def test_family_of_isotropy(self, s3):
        assert family_of(GSet(s3, [C2, C3])).members == {E, C2, C3}

    def test_not_closed_under_subgroups(self, s3):
        with pytest.raises(FamilyError):
            Family(s3, frozenset({C2}))

    def test_family_spec(self, s4):
        assert parse_family_spec(s4, "cyclic") == cyclic_family(s4)
        with pytest.raises(GroupSpecError):
            parse_family_spec(s4, "elementary:4")


class TestHyperClosure:
    def test_two_group_closes_to_everything(self, c2):
        assert hyper_p_closure(trivial_family(c2), 2).members == {0, 1}

    def test_wrong_prime_adds_nothing(self, c2):
        assert hyper_p_closure(trivial_family(c2), 3).members == {0}

    def test_cyclic_family_of_s3(self, s3):
        assert hyper_p_closure(cyclic_family(s3), 2) == all_family(s3)

    def test_per_class_oracle(self, s4):
        cyclic = cyclic_family(s4)
        for p in (2, 3):
            closure = hyper_p_closure(cyclic, p)
            for c in s4.lattice.classes:
                assert (c.index in closure.members) == o_p(c.representative, p).is_cyclic()

    def test_hyper_p_set_receives_a_map(self, s4):
        x = gset_of_family(cyclic_family(s4))
        assert all_gmaps(x, hyper_p_set(x, 2))

    def test_not_prime(self, c2):
        with pytest.raises(FamilyError):
            hyper_p_closure(trivial_family(c2), 4)
