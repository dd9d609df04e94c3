"""Amitsur complexes of a Mackey (pre-)functor and contractions built from Burnside elements.

Am_0 = Y and Am_r = X x Am_{r-1}. The face d_0: Am_r -> Am_{r-1} forgets
the first X coordinate and d_i = 1 x d_{i-1}. The homological complex has
boundary sum_i (-1)^i M_*(d_i), the cohomological one coboundary
sum_i (-1)^i M^*(d_i).
"""

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from .bqgr import bqgr
from .burnside import BurnsideElement, burnside_ring
from .chains import (
    COHOMOLOGICAL,
    HOMOLOGICAL,
    ChainData,
    ExactnessReport,
    Filtration,
    RepairResult,
    Variant,
    check_exactness,
    repair_filtered_truncated,
)
from .dress import GeneratingElement, generating_element, is_generating
from .exceptions import CapExceededError, ConfigError, SiteMismatchError
from .groups import Group, Orientation
from .gsets import GMap, GSet, Pullback, gset_of_family, p_hyperelementary_family, product
from .mackey import GreenRingData, MackeyData, signed_pre_functor
from .zlocal import (
    INTEGRAL,
    IntMatrix,
    Locale,
    SurjectivityVerdict,
    equal,
    fraction_mod,
    identity,
    mat_mul,
    reduce_mod,
    zeros,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AmitsurComplex:
    """The G-sets Am_0..Am_n, their face maps and the assembled chain data."""

    functor: MackeyData
    x: GSet
    y: GSet
    levels: tuple[GSet, ...]
    products: tuple[Pullback | None, ...]
    faces: tuple[tuple[GMap, ...], ...]
    chain: ChainData

    @property
    def top_degree(self) -> int:
        return len(self.levels) - 1

    def simplicial_defects(self) -> list[tuple[int, int, int]]:
        """(r, i, j) with i < j where d_i d_j != d_{j-1} d_i on Am_r."""
        out = []
        for r in range(2, self.top_degree + 1):
            for j in range(r):
                for i in range(j):
                    left = self.faces[r - 1][i].point_map[self.faces[r][j].point_map]
                    right = self.faces[r - 1][j - 1].point_map[self.faces[r][i].point_map]
                    if not np.array_equal(left, right):
                        out.append((r, i, j))
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "functor": self.functor.name,
            "x": self.x.to_dict(),
            "y": self.y.to_dict(),
            "levels": [{"degree": r, "points": s.n_points, "orbits": len(s.instances)}
                       for r, s in enumerate(self.levels)],
            "chain": self.chain.to_dict(),
        }


def _faces(products: list[Pullback | None], r: int, previous: tuple[GMap, ...]) -> tuple[GMap, ...]:
    """d_0..d_{r-1} on Am_r from the faces on Am_{r-1}."""
    current = products[r]
    assert current is not None
    faces = [current.right]
    if r >= 2:
        below = products[r - 1]
        assert below is not None
        xs = current.left.point_map
        ws = current.right.point_map
        for i in range(1, r):
            point_map = below.indices(xs, previous[i - 1].point_map[ws])
            faces.append(GMap.from_point_map(current.gset, below.gset, point_map))
    return tuple(faces)


def amitsur_complex(
    m: MackeyData | GreenRingData,
    x: GSet,
    y: GSet,
    n: int,
    variant: Variant = HOMOLOGICAL,
    locale: Locale = INTEGRAL,
) -> AmitsurComplex:
    """Materialize Am_0..Am_n and assemble the (co)chain maps of M on them.

    Raises:
        CapExceededError: If n exceeds the degree cap or a level exceeds the point cap.
    """
    functor = m.base if isinstance(m, GreenRingData) else m
    group = functor.group
    if x.group is not group or y.group is not group:
        raise SiteMismatchError("Amitsur complex over G-sets of a different group")
    cap = group.limits.max_degree
    if n > cap:
        raise CapExceededError("Amitsur degree", n, cap)
    if n < 1:
        raise ConfigError(f"Amitsur complex needs at least one degree, got {n}")
    levels = [y]
    products: list[Pullback | None] = [None]
    faces: list[tuple[GMap, ...]] = [()]
    for r in range(1, n + 1):
        p = product(x, levels[-1])
        levels.append(p.gset)
        products.append(p)
        faces.append(_faces(products, r, faces[-1]))
        logger.debug(f"Am_{r}: {p.gset.n_points} points in {len(p.gset.instances)} orbits")

    def alternating(maps: list[IntMatrix], rows: int, cols: int) -> IntMatrix:
        out = zeros(rows, cols)
        for i, matrix in enumerate(maps):
            out = out + (-1) ** i * matrix
        return out

    groups = tuple(functor.evaluate(s) for s in levels)
    ranks = [g.n_generators for g in groups]
    if variant == HOMOLOGICAL:
        maps = tuple(
            alternating([functor.covariant(d) for d in faces[r]], ranks[r - 1], ranks[r])
            for r in range(1, n + 1)
        )
    elif variant == COHOMOLOGICAL:
        maps = tuple(
            alternating([functor.contravariant(d) for d in faces[r + 1]], ranks[r + 1], ranks[r])
            for r in range(n)
        )
    else:
        raise ConfigError(f"Unknown variant '{variant}'")
    chain = ChainData(
        groups=groups,
        maps=maps,
        variant=variant,
        locale=locale,
        label=f"Am({functor.name}; {x.describe()}, {y.describe()})",
    )
    logger.info(f"{chain.label}: ranks {ranks}, complex={chain.is_complex()}")
    return AmitsurComplex(functor, x, y, tuple(levels), tuple(products), tuple(faces), chain)


@dataclass(frozen=True, eq=False)
class Homotopy:
    """s_r(a): M(Am_r) -> M(Am_{r+1}) and the cochain maps M(Am_{r+1}) -> M(Am_r).

    `actions[r]` is the action on M(Am_r) of the restriction of the
    induction of a to the point, which s(a) should contract onto.
    """

    element: BurnsideElement
    maps: tuple[np.ndarray, ...]
    cochain_maps: tuple[np.ndarray, ...]
    actions: tuple[np.ndarray, ...]

    def defects(self, complex_: AmitsurComplex) -> list[np.ndarray]:
        """d_{r+1} s_r + s_{r-1} d_r - action, per degree r < n (homological complexes)."""
        chain = complex_.chain
        if chain.variant != HOMOLOGICAL:
            raise ConfigError("Homotopy defects are computed on the homological complex")
        out = []
        for r in range(len(self.maps)):
            total = mat_mul(chain.boundary(r + 1), self.maps[r]) - self.actions[r]
            if r >= 1:
                total = total + mat_mul(self.maps[r - 1], chain.boundary(r))
            out.append(total)
        return out

    def contracts(self, complex_: AmitsurComplex, modulus: int = 0) -> bool:
        """Whether s(a) is a contraction up to d∘d, i.e. every action is the identity."""
        groups = complex_.chain.groups
        for r, action in enumerate(self.actions):
            diff = action - identity(groups[r].n_generators)
            if modulus:
                if any(fraction_mod(v, modulus) for v in diff.flat):
                    return False
            elif not groups[r].vanishes(diff):
                return False
        return True


def homotopy_from_element(a: BurnsideElement, complex_: AmitsurComplex) -> Homotopy:
    """Chain maps s_r(a) = sum_k a_k (e_r)_* (g_r)^* over the basis (Z, alpha) of a.

    e_r: Z x Am_r -> X x Am_r is alpha x 1 and g_r: Z x Am_r -> Am_r the
    projection. The cochain maps use (g_r)_* (e_r)^* instead.

    Raises:
        SiteMismatchError: If a does not live over the complex's X.
    """
    if a.site != complex_.x:
        raise SiteMismatchError("Burnside element is not over the X of the complex")
    m = complex_.functor
    n = complex_.top_degree
    levels = complex_.levels
    ranks = [m.evaluate(s).n_generators for s in levels]
    maps = [zeros(ranks[r + 1], ranks[r]) for r in range(n)]
    cochain = [zeros(ranks[r], ranks[r + 1]) for r in range(n)]
    actions = [zeros(ranks[r], ranks[r]) for r in range(n)]
    ring = burnside_ring(complex_.x)
    for k, coefficient in enumerate(a.coeffs):
        if coefficient == 0:
            continue
        alpha = ring.basis_map(k)
        for r in range(n):
            z_times = product(alpha.source, levels[r])
            above = complex_.products[r + 1]
            assert above is not None
            point_map = above.indices(
                alpha.point_map[z_times.left.point_map], z_times.right.point_map
            )
            e_r = GMap.from_point_map(z_times.gset, above.gset, point_map)
            g_r = z_times.right
            maps[r] = maps[r] + coefficient * mat_mul(m.covariant(e_r), m.contravariant(g_r))
            cochain[r] = cochain[r] + coefficient * mat_mul(m.covariant(g_r), m.contravariant(e_r))
            actions[r] = actions[r] + coefficient * mat_mul(m.covariant(g_r), m.contravariant(g_r))
    return Homotopy(a, tuple(maps), tuple(cochain), tuple(actions))


def with_contraction(
    complex_: AmitsurComplex, homotopy: Homotopy, filtration: Filtration | None = None
) -> ChainData:
    """The complex's chain data carrying s(a) as its candidate contraction."""
    chain = complex_.chain
    contraction = homotopy.maps if chain.variant == HOMOLOGICAL else homotopy.cochain_maps
    return ChainData(
        groups=chain.groups,
        maps=chain.maps,
        variant=chain.variant,
        contraction=contraction,
        filtration=filtration,
        modulus=chain.modulus,
        locale=chain.locale,
        label=chain.label,
    )


@dataclass(frozen=True, eq=False)
class TwoAdicPipeline:
    """Signed pre-functor over the hyper-elementary G-set, contracted modulo 2^k."""

    group: Group
    omega: Orientation
    amitsur: AmitsurComplex
    generator: GeneratingElement
    homotopy: Homotopy
    repair: RepairResult
    k: int

    @property
    def summand_split(self) -> bool:
        """d'_1 s'_0 = 1 mod 2^k: M(Y) is a direct summand of M(X x Y)."""
        d1 = self.repair.boundary(1)
        s0 = self.repair.contraction(0)
        modulus = 2 ** self.k
        product_ = reduce_mod(mat_mul(d1, s0), modulus)
        return equal(product_, reduce_mod(identity(d1.shape[0]), modulus))

    def to_dict(self) -> dict[str, Any]:
        return {
            "group": self.group.name,
            "omega": self.omega.to_dict(),
            "x": self.amitsur.x.to_dict(),
            "truncation": self.k,
            "element": self.generator.to_dict(),
            "pre_complex_is_complex": self.amitsur.chain.is_complex(),
            "summand_split": self.summand_split,
            "repair": self.repair.to_dict(),
        }


def two_adic_pipeline(
    group: Group, omega: Orientation, k: int = 3, degrees: int = 2, p: int = 2
) -> TwoAdicPipeline:
    """Amitsur pre-complex of the signed pre-functor, contracted by s(a), repaired mod p^k.

    X is the hyper_p-elementary G-set, Y the point and a an element of
    A(X) ⊗ Z_(p) inducing the identity on M(•).
    """
    if p != 2:
        raise ConfigError("The truncated repair uses the 2-power filtration")
    m = signed_pre_functor(group, omega)
    x = gset_of_family(p_hyperelementary_family(group, p))
    complex_ = amitsur_complex(m, x, GSet.point(group), degrees, locale=p)
    generator = generating_element(m, x, p)
    homotopy = homotopy_from_element(generator.element(), complex_)
    chain = with_contraction(complex_, homotopy, Filtration.power_of_two(k))
    repair = repair_filtered_truncated(chain, k)
    result = TwoAdicPipeline(group, omega, complex_, generator, homotopy, repair, k)
    logger.info(
        f"{group.name}: signed pre-functor over {x.describe()}, repaired mod {2 ** k}, "
        f"verified={repair.verified}, summand={result.summand_split}"
    )
    return result


@dataclass(frozen=True)
class SurjectivityExactness:
    """Generation of A_M by X against exactness of both Amitsur variants."""

    verdict: SurjectivityVerdict
    homological: ExactnessReport
    cohomological: ExactnessReport

    @property
    def consistent(self) -> bool:
        """Surjectivity forces exactness of every Amitsur complex over X."""
        return not self.verdict.surjective or (self.homological.exact and self.cohomological.exact)

    def to_dict(self) -> dict[str, Any]:
        return {
            "surjective": self.verdict.to_dict(),
            "homological": self.homological.to_dict(),
            "cohomological": self.cohomological.to_dict(),
            "consistent": self.consistent,
        }


def exactness_from_surjectivity(
    m: MackeyData | GreenRingData, x: GSet, n: int = 3, locale: Locale = INTEGRAL
) -> SurjectivityExactness:
    """Compare A_M(X) -> A_M(•) onto with exactness of Am(M; X, •) in both variants.

    Both complexes are checked in degrees 0..n-1. In degree 0 the homological
    check is surjectivity of induction from X and the cohomological one is
    injectivity of restriction to X.
    """
    ring = m if isinstance(m, GreenRingData) else bqgr(m).ring
    y = GSet.point(x.group)
    verdict = is_generating(ring, x, locale)
    homological = check_exactness(amitsur_complex(m, x, y, n, HOMOLOGICAL, locale).chain)
    cochain = amitsur_complex(m, x, y, n, COHOMOLOGICAL, locale).chain
    cohomological = check_exactness(cochain)
    result = SurjectivityExactness(verdict, homological, cohomological)
    logger.info(f"{ring.name} over {x.describe()}: surjective={verdict.surjective}, "
                f"consistent={result.consistent}")
    return result
