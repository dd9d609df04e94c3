"""Tests for chain data, exactness and contraction repair."""

import pytest

from burnside_induction.chains import (
    COHOMOLOGICAL,
    ChainData,
    Filtration,
    check_exactness,
    load_chain,
    random_pseudo_complex,
    repair_filtered_truncated,
    repair_pseudo_complex,
    save_chain,
)
from burnside_induction.exceptions import (
    ConfigError,
    NotComplexError,
    NotContractedError,
    ShapeMismatchError,
)
from burnside_induction.mackey import AbGroupPresentation
from burnside_induction.zlocal import as_int_matrix, equal, identity, is_zero, mat_mul


def _free_chain(ranks, maps, contraction=None, **kwargs):
    return ChainData(
        groups=tuple(AbGroupPresentation.free(n) for n in ranks),
        maps=tuple(as_int_matrix(m, *shape) for m, shape in maps),
        contraction=None if contraction is None else tuple(
            as_int_matrix(s, *shape) for s, shape in contraction
        ),
        **kwargs,
    )


@pytest.fixture
def two_step():
    """Z <- Z^2 <- Z with d1 d2 = 2 and a contraction that only holds modulo 2."""
    return _free_chain(
        [1, 2, 1],
        [([[1, 0]], (1, 2)), ([[2], [1]], (2, 1))],
        [([[1], [0]], (2, 1)), ([[0, 1]], (1, 2))],
        label="two-step",
    )


class TestChainData:
    def test_boundary_shapes(self, two_step):
        assert two_step.ranks == [1, 2, 1]
        assert two_step.top_degree == 2
        assert two_step.boundary(2).shape == (2, 1)
        assert two_step.homotopy(1).shape == (1, 2)

    def test_wrong_map_shape(self):
        with pytest.raises(ShapeMismatchError):
            _free_chain([1, 2], [([[1, 0, 0]], (1, 3))])

    def test_wrong_number_of_maps(self):
        with pytest.raises(ShapeMismatchError):
            ChainData(groups=(AbGroupPresentation.free(1),) * 3, maps=())

    def test_wrong_contraction_shape(self):
        with pytest.raises(ShapeMismatchError):
            _free_chain([1, 1], [([[1]], (1, 1))], [([[1, 0]], (1, 2))])

    def test_square_defect(self, two_step):
        assert not two_step.is_complex()
        (degree, square), = two_step.square_defects()
        assert degree == 0
        assert square.tolist() == [[2]]
        assert two_step.reduced(2).is_complex()

    def test_homotopy_needs_contraction(self):
        c = _free_chain([1, 1], [([[2]], (1, 1))])
        with pytest.raises(NotContractedError):
            c.homotopy(0)

    def test_filtration_depth_must_be_positive(self):
        with pytest.raises(ConfigError):
            Filtration(0)

    def test_save_and_load(self, tmp_path):
        chain = random_pseudo_complex(seed=7)
        path = tmp_path / "chain.json"
        save_chain(chain, path)
        loaded = load_chain(path)
        assert loaded.ranks == chain.ranks
        assert loaded.label == chain.label
        assert all(equal(a, b) for a, b in zip(loaded.maps, chain.maps, strict=True))
        assert all(
            equal(a, b) for a, b in zip(loaded.contraction, chain.contraction, strict=True)
        )
        assert loaded.filtration.depth == chain.filtration.depth
        assert repair_pseudo_complex(loaded).verified


class TestExactness:
    def test_multiplication_by_two(self):
        c = _free_chain([1, 1], [([[2]], (1, 1))])
        report = check_exactness(c)
        assert report.homology[0].torsion == (2,)
        assert report.nonzero_degrees == [0]
        assert not report.exact
        assert check_exactness(c, locale=3).exact

    def test_cohomological_identity(self):
        c = _free_chain([1, 1, 1], [([[1]], (1, 1)), ([[0]], (1, 1))], variant=COHOMOLOGICAL)
        report = check_exactness(c)
        assert report.vanishes(0)
        assert report.homology[1].free_rank == 0

    def test_not_a_complex(self, two_step):
        with pytest.raises(NotComplexError):
            check_exactness(two_step)

    def test_degree_out_of_range(self):
        c = _free_chain([1, 1], [([[1]], (1, 1))])
        with pytest.raises(ConfigError):
            check_exactness(c, degrees=[1])

    def test_report_dict(self):
        c = _free_chain([1, 1], [([[2]], (1, 1))])
        data = check_exactness(c).to_dict()
        assert data["exact"] is False
        assert data["homology"]["0"]["text"] == "Z/2"
        assert data["homology"]["0"]["vanishes"] is False


class TestRepair:
    def test_two_step_modulo_four(self, two_step):
        result = repair_filtered_truncated(two_step, 2)
        assert result.verified
        assert result.first_boundary_unchanged
        assert result.chain.modulus == 4
        assert 2 in result.changed_degrees
        assert result.boundary(2).tolist() == [[0], [1]]
        assert is_zero(mat_mul(result.boundary(1), result.boundary(2)), 4)

    def test_repaired_chain_is_exact(self, two_step):
        result = repair_filtered_truncated(two_step, 2)
        assert check_exactness(result.chain).exact

    def test_truncation_must_be_positive(self, two_step):
        with pytest.raises(ConfigError):
            repair_filtered_truncated(two_step, 0)

    def test_two_adic_filtration_delegates(self, two_step):
        filtered = ChainData(
            groups=two_step.groups,
            maps=two_step.maps,
            contraction=two_step.contraction,
            filtration=Filtration.power_of_two(2),
        )
        result = repair_pseudo_complex(filtered)
        assert result.chain.modulus == 4
        assert result.verified

    def test_contracted_complex_is_untouched(self):
        c = _free_chain([1, 1], [([[1]], (1, 1))], [([[1]], (1, 1))])
        result = repair_pseudo_complex(c)
        assert result.verified
        assert result.changed_degrees == ()

    def test_uncontracted_input_rejected(self):
        c = _free_chain([1, 1], [([[2]], (1, 1))], [([[1]], (1, 1))])
        with pytest.raises(NotContractedError):
            repair_pseudo_complex(c)

    def test_missing_contraction(self, two_step):
        bare = ChainData(groups=two_step.groups, maps=two_step.maps)
        with pytest.raises(NotContractedError):
            repair_pseudo_complex(bare)
        with pytest.raises(NotContractedError):
            repair_filtered_truncated(bare, 2)

    @pytest.mark.parametrize("seed", range(120))
    def test_random_pseudo_complexes(self, seed):
        chain = random_pseudo_complex(seed=seed)
        result = repair_pseudo_complex(chain)
        assert result.verified
        assert result.chain.is_complex()
        assert equal(result.boundary(1), chain.boundary(1))
        assert set(result.nilpotency.values()) <= {1, 2, 3}
        top = result.chain.top_degree
        for r in range(top):
            d_next, s_r = result.boundary(r + 1), result.contraction(r)
            psi = mat_mul(d_next, s_r)
            if r >= 1:
                assert is_zero(mat_mul(result.boundary(r), d_next))
                psi = psi + mat_mul(result.contraction(r - 1), result.boundary(r))
            assert equal(mat_mul(d_next, s_r, d_next), d_next)
            assert equal(psi, identity(chain.ranks[r]))

    @pytest.mark.parametrize("seed", [7, 9, 11])
    def test_fixtures_with_an_empty_degree(self, seed):
        chain = random_pseudo_complex(seed=seed)
        assert 0 in chain.ranks
        assert repair_pseudo_complex(chain).verified

    def test_random_fixture_is_deterministic(self):
        a, b = random_pseudo_complex(seed=3), random_pseudo_complex(seed=3)
        assert a.ranks == b.ranks
        assert all(equal(x, y) for x, y in zip(a.maps, b.maps, strict=True))
