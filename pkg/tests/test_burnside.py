"""Tests for Burnside rings over a base G-set."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burnside_induction.burnside import (
    act,
    basis,
    burnside_ring,
    induce,
    marks,
    multiply,
    restrict,
    table_of_marks,
    unit,
)
from burnside_induction.exceptions import SiteMismatchError
from burnside_induction.gsets import GMap, GSet, all_gmaps, parse_gset_spec
from burnside_induction.mackey import burnside_functor

E, C2, C3, TOP = 0, 1, 2, 3


def _fixed_cosets(group, k, h):
    """Cosets xK with h xK = xK for every h in H, by direct enumeration."""
    cosets = {tuple(sorted(group.mul(x, y) for y in k.elements)) for x in range(group.order)}
    return sum(
        1 for coset in cosets
        if all(tuple(sorted(group.mul(a, y) for y in coset)) == coset for a in h.elements)
    )


class TestBasis:
    def test_point_of_s3(self, s3):
        assert len(basis(GSet.point(s3))) == 4

    def test_empty(self, s3):
        assert basis(GSet(s3)) == []

    def test_free_orbit_of_c2(self, c2):
        (b,) = basis(GSet.free(c2))
        assert b.subgroup.order == 1

    def test_transitive_site_is_burnside_ring_of_subgroup(self, s4):
        site = GSet.transitive(s4, s4.lattice.class_by_name("H6"))
        assert burnside_ring(site).rank == 4


class TestTableOfMarks:
    def test_s3(self, s3):
        table = table_of_marks(s3)
        assert table.shape == (4, 4)
        assert [int(v) for v in table[C2]] == [3, 1, 0, 0]
        assert all(table[i, j] == 0 for i in range(4) for j in range(i + 1, 4))

    def test_against_coset_oracle(self, s4):
        lattice = s4.lattice
        table = table_of_marks(s4)
        for k in range(len(lattice)):
            for h in range(len(lattice)):
                assert table[k, h] == _fixed_cosets(s4, lattice.rep(k), lattice.rep(h))

    def test_marks_of_free_orbit_and_unit(self, s3):
        ring = burnside_ring(GSet.point(s3))
        assert marks(ring.basis_element(E))[E] == 6
        assert list(marks(ring.unit())) == [1, 1, 1, 1]

    def test_marks_need_the_point(self, s3):
        with pytest.raises(SiteMismatchError):
            marks(unit(GSet.free(s3)))


class TestProducts:
    def test_unit_is_neutral(self, s3):
        site = parse_gset_spec(s3, "C2,C3")
        ring = burnside_ring(site)
        for k in range(ring.rank):
            a = ring.basis_element(k)
            assert unit(site) * a == a

    def test_free_squared_in_c2(self, c2):
        ring = burnside_ring(GSet.point(c2))
        free = ring.basis_element(0)
        assert free * free == 2 * free

    def test_s3_c2_times_c3(self, s3):
        ring = burnside_ring(GSet.point(s3))
        assert multiply(ring.basis_element(C2), ring.basis_element(C3)) == ring.basis_element(E)

    @settings(max_examples=25, deadline=None)
    @given(
        st.lists(st.integers(-4, 4), min_size=4, max_size=4),
        st.lists(st.integers(-4, 4), min_size=4, max_size=4),
    )
    def test_marks_are_multiplicative(self, s3, a, b):
        ring = burnside_ring(GSet.point(s3))
        x, y = ring.element(a), ring.element(b)
        assert list(marks(x * y)) == [u * v for u, v in zip(marks(x), marks(y), strict=True)]

    def test_associative_over_a_transitive_site(self, s4):
        ring = burnside_ring(GSet.transitive(s4, s4.lattice.class_by_name("H8")))
        e = [ring.basis_element(k) for k in range(ring.rank)]
        for a in e:
            for b in e:
                for c in e[::3]:
                    assert (a * b) * c == a * (b * c)

    def test_site_mismatch(self, s3):
        with pytest.raises(SiteMismatchError):
            unit(GSet.free(s3)) + unit(GSet.point(s3))


class TestInductionRestriction:
    def test_induce_free_orbit_to_point(self, c2):
        free = GSet.free(c2)
        a = burnside_ring(free).basis_element(0)
        induced = induce(a, GMap.to_point(free))
        assert induced == burnside_ring(GSet.point(c2)).basis_element(0)

    def test_restrict_preserves_units(self, s3):
        site = parse_gset_spec(s3, "e,C3")
        assert restrict(unit(GSet.point(s3)), GMap.to_point(site)) == unit(site)

    def test_restrict_free_orbit_to_c2(self, s3):
        site = GSet.transitive(s3, C2)
        a = burnside_ring(GSet.point(s3)).basis_element(E)
        restricted = restrict(a, GMap.to_point(site))
        assert list(restricted.coeffs) == [3, 0]

    def test_frobenius_reciprocity(self, s3):
        # phi_*(phi^*(b) * a) = b * phi_*(a)
        site = GSet.transitive(s3, C2)
        phi = GMap.to_point(site)
        point_ring, site_ring = burnside_ring(GSet.point(s3)), burnside_ring(site)
        for i in range(point_ring.rank):
            b = point_ring.basis_element(i)
            for k in range(site_ring.rank):
                a = site_ring.basis_element(k)
                assert induce(restrict(b, phi) * a, phi) == b * induce(a, phi)

    def test_induction_is_functorial(self, s3):
        f = all_gmaps(GSet.free(s3), GSet.transitive(s3, C2))[2]
        g = GMap.to_point(f.target)
        a = burnside_ring(f.source).basis_element(0)
        assert induce(induce(a, f), g) == induce(a, g.compose(f))


class TestAction:
    def test_unit_acts_as_identity(self, s3):
        m = burnside_functor(s3).base
        site = parse_gset_spec(s3, "C2,e")
        n = m.evaluate(site).n_generators
        x = np.arange(1, n + 1)
        assert list(act(unit(site), m, x)) == list(x)

    def test_self_action_is_the_product(self, s3):
        m = burnside_functor(s3).base
        ring = burnside_ring(GSet.point(s3))
        for i in range(ring.rank):
            for j in range(ring.rank):
                a, b = ring.basis_element(i), ring.basis_element(j)
                assert list(act(a, m, b.coeffs)) == list((a * b).coeffs)

    def test_act_on_unit(self, s3):
        m = burnside_functor(s3).base
        ring = burnside_ring(GSet.point(s3))
        a = ring.basis_element(C2)
        assert list(act(a, m, ring.unit_vector)) == list(a.coeffs)
