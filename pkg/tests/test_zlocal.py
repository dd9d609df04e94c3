"""Tests for exact integer and p-local linear algebra."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burnside_induction.exceptions import ShapeMismatchError
from burnside_induction.zlocal import (
    GENERIC,
    INTEGRAL,
    as_int_matrix,
    cokernel_invariants,
    congruence_kernel,
    coordinates,
    fraction_mod,
    identity,
    is_p_unit,
    is_surjective_localized,
    kernel,
    lattice_contains,
    lattice_intersection,
    lattice_sum,
    lattices_equal,
    mat_mul,
    snf,
    solve_integral,
    solve_localized,
    zeros,
)

small_matrices = st.integers(min_value=1, max_value=4).flatmap(
    lambda rows: st.integers(min_value=1, max_value=4).flatmap(
        lambda cols: st.lists(
            st.lists(st.integers(min_value=-9, max_value=9), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
)


class TestSmithNormalForm:
    def test_identity(self):
        form = snf(identity(3))
        assert form.divisors == [1, 1, 1]
        assert np.array_equal(form.D, identity(3))

    def test_diagonal_two_three(self):
        form = snf(as_int_matrix([[2, 0], [0, 3]]))
        assert form.divisors == [1, 6]

    def test_zero_matrix(self):
        form = snf(zeros(2, 3))
        assert form.rank == 0
        assert not form.D.any()

    def test_empty_matrix(self):
        assert snf(zeros(0, 2)).rank == 0

    @settings(max_examples=60, deadline=None)
    @given(small_matrices)
    def test_transform_and_divisibility(self, rows):
        m = as_int_matrix(rows)
        form = snf(m)
        assert np.array_equal(mat_mul(form.U, m, form.V), form.D)
        assert np.array_equal(mat_mul(form.U, form.U_inv), identity(m.shape[0]))
        assert np.array_equal(mat_mul(form.V, form.V_inv), identity(m.shape[1]))
        divisors = form.divisors
        assert all(d > 0 for d in divisors)
        assert all(b % a == 0 for a, b in zip(divisors, divisors[1:], strict=False))


class TestSurjectivity:
    def test_unit_is_surjective_everywhere(self):
        m = as_int_matrix([[1]])
        for locale in (INTEGRAL, GENERIC, 2, 3):
            assert is_surjective_localized(m, locale).surjective

    def test_two_is_a_unit_away_from_two(self):
        m = as_int_matrix([[2]])
        assert is_surjective_localized(m, 3).surjective
        assert not is_surjective_localized(m, 2).surjective
        assert not is_surjective_localized(m, INTEGRAL).surjective
        assert is_surjective_localized(m, GENERIC).surjective

    def test_bezout_row(self):
        assert is_surjective_localized(as_int_matrix([[2, 3]])).surjective

    def test_zero_map_has_free_cokernel(self):
        verdict = is_surjective_localized(as_int_matrix([[0]]), GENERIC)
        assert not verdict.surjective
        assert verdict.invariants.free_rank == 1

    def test_cokernel_invariants(self):
        inv = cokernel_invariants(as_int_matrix([[2, 0], [0, 3]]))
        assert inv.free_rank == 0
        assert inv.torsion == (6,)
        assert inv.primes == (2, 3)
        assert inv.localized(2).torsion == (2,)
        assert inv.describe() == "Z/6"


class TestSolving:
    def test_half_at_three(self):
        solution = solve_localized(as_int_matrix([[2]]), [1], 3)
        assert solution.feasible
        assert solution.x == [Fraction(1, 2)]

    def test_half_blocked_at_two(self):
        solution = solve_localized(as_int_matrix([[2]]), [1], 2)
        assert not solution.feasible
        assert solution.certificate["modulus"] == 2

    def test_integral_solution(self):
        m = as_int_matrix([[2, 3]])
        x = solve_integral(m, [1])
        assert x is not None
        assert 2 * x[0] + 3 * x[1] == 1

    def test_integral_infeasible(self):
        assert solve_integral(as_int_matrix([[2], [0]]), [1, 0]) is None

    def test_rhs_shape_checked(self):
        with pytest.raises(ShapeMismatchError):
            solve_integral(as_int_matrix([[1, 0]]), [1, 2])

    @settings(max_examples=60, deadline=None)
    @given(small_matrices, st.sampled_from([2, 3, 5]), st.data())
    def test_consistent_residual_vanishes(self, rows, p, data):
        m = as_int_matrix(rows)
        x0 = data.draw(st.lists(st.integers(-5, 5), min_size=m.shape[1], max_size=m.shape[1]))
        b = m.dot(np.array(x0, dtype=object))
        solution = solve_localized(m, b, p)
        assert solution.feasible
        assert all(is_p_unit(v, p) for v in solution.x)
        residual = [sum((m[i, j] * solution.x[j] for j in range(m.shape[1])), Fraction(0)) - b[i]
                    for i in range(m.shape[0])]
        assert all(r == 0 for r in residual)


class TestLattices:
    def test_kernel(self):
        m = as_int_matrix([[1, 1, 0], [0, 0, 1]])
        ker = kernel(m)
        assert ker.shape == (3, 1)
        assert not mat_mul(m, ker).any()

    def test_sum_and_intersection(self):
        a = as_int_matrix([[2], [0]])
        b = as_int_matrix([[3], [0]])
        assert lattices_equal(lattice_sum(a, b), as_int_matrix([[1], [0]]))
        assert lattices_equal(lattice_intersection(a, b), as_int_matrix([[6], [0]]))

    def test_contains_modulo(self):
        lattice = as_int_matrix([[2], [0]])
        assert not lattice_contains(lattice, as_int_matrix([[1], [0]]))
        assert lattice_contains(lattice, as_int_matrix([[1], [0]]), modulus=3)

    def test_contains_in_rank_zero(self):
        empty = zeros(0, 0)
        assert lattice_contains(empty, zeros(0, 3))
        assert lattice_contains(empty, zeros(0, 2), modulus=4)

    def test_congruence_kernel(self):
        basis = congruence_kernel(as_int_matrix([[1, 1]]), [2])
        assert basis.shape == (2, 2)
        assert all((basis[0, j] + basis[1, j]) % 2 == 0 for j in range(2))
        assert abs(basis[0, 0] * basis[1, 1] - basis[0, 1] * basis[1, 0]) == 2

    def test_coordinates_reject_outside_vectors(self):
        with pytest.raises(ShapeMismatchError):
            coordinates(as_int_matrix([[2]]), as_int_matrix([[1]]))


def test_fraction_mod():
    assert fraction_mod(Fraction(1, 3), 4) == 3
    assert fraction_mod(-1, 8) == 7
