"""Generating sets, Dress generating sets and induction coefficients.

A G-set X generates a Green ring G when the induction G(X) -> G(•) is onto.
X is Dress generating when, for every prime p, the hyper_p-closure of X
generates after localizing at p. Primes not dividing |G| are covered at
once: there hyper_p-X = X, so it is enough that the integral cokernel is
finite with prime divisors inside |G|.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Any

from sympy import primefactors

from .bqgr import bqgr
from .burnside import BurnsideElement, action_matrix, burnside_ring
from .exceptions import FamilyError, InfeasibleError, NotGeneratingError
from .gsets import Family, GMap, GSet, gset_of_family, hyper_p_closure, hyper_p_set
from .mackey import GreenRingData, MackeyData
from .zlocal import (
    GENERIC,
    INTEGRAL,
    IntMatrix,
    Locale,
    SurjectivityVerdict,
    block_diagonal,
    hstack,
    identity,
    is_surjective_localized,
    kernel,
    solve_integral,
    solve_localized,
    zeros,
)

logger = logging.getLogger(__name__)


def _functor_of(target: MackeyData | GreenRingData) -> MackeyData:
    return target.base if isinstance(target, GreenRingData) else target


def induction_to_point(m: MackeyData, x: GSet) -> IntMatrix:
    return m.covariant(GMap.to_point(x))


def is_generating(
    g: GreenRingData | MackeyData, x: GSet, locale: Locale = INTEGRAL
) -> SurjectivityVerdict:
    """Surjectivity of G(X) -> G(•) integrally, at a prime, or up to finite index."""
    m = _functor_of(g)
    top = m.values[-1]
    stacked = hstack([induction_to_point(m, x), top.relations], top.n_generators)
    verdict = is_surjective_localized(stacked, locale)
    logger.debug(
        f"{m.name}: {x.describe()} -> point at {locale}: cokernel {verdict.invariants.describe()}"
    )
    return verdict


@dataclass(frozen=True)
class PrimeVerdict:
    prime: int
    gset: GSet
    verdict: SurjectivityVerdict

    def to_dict(self) -> dict[str, Any]:
        return {"prime": self.prime, "hyper_set": self.gset.to_dict(), **self.verdict.to_dict()}


@dataclass(frozen=True)
class DressReport:
    """Per-prime and generic generation verdicts for one G-set."""

    subject: str
    gset: GSet
    per_prime: tuple[PrimeVerdict, ...]
    generic: SurjectivityVerdict
    group_primes: tuple[int, ...]

    @property
    def generic_ok(self) -> bool:
        return self.generic.surjective and set(self.generic.invariants.primes) <= set(self.group_primes)

    @property
    def overall(self) -> bool:
        return self.generic_ok and all(v.verdict.surjective for v in self.per_prime)

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "gset": self.gset.to_dict(),
            "per_prime": [v.to_dict() for v in self.per_prime],
            "generic": {**self.generic.to_dict(), "verdict": self.generic_ok},
            "overall": self.overall,
        }


def is_dress_generating(target: GreenRingData | MackeyData, x: GSet) -> DressReport:
    """Dress check of X for a Green ring, or for A_M when given a Mackey functor."""
    ring = target if isinstance(target, GreenRingData) else bqgr(target).ring
    primes = tuple(primefactors(x.group.order))
    per_prime = tuple(
        PrimeVerdict(p, hyper_p_set(x, p), is_generating(ring, hyper_p_set(x, p), p))
        for p in primes
    )
    report = DressReport(ring.name, x, per_prime, is_generating(ring, x, GENERIC), primes)
    logger.info(f"Dress check of {x.describe()} for {ring.name}: {report.overall}")
    return report


@dataclass(frozen=True)
class CoverReport:
    """M(•) at p against restriction kernel plus hyper_p induction image."""

    prime: int
    kernel_rank: int
    verdict: SurjectivityVerdict

    @property
    def holds(self) -> bool:
        return self.verdict.surjective

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict[str, Any]:
        return {"prime": self.prime, "kernel_rank": self.kernel_rank, "holds": self.holds,
                **self.verdict.to_dict()}


def kernel_image_cover_check(m: MackeyData | GreenRingData, y: GSet, p: int) -> CoverReport:
    """Whether M(•)_(p) is the kernel of restriction to Y plus the image of induction from hyper_p-Y."""
    functor = _functor_of(m)
    top = functor.values[-1]
    n = top.n_generators
    res = functor.contravariant(GMap.to_point(y))
    rel_y = functor.evaluate(y).relations
    stacked = hstack([res, -rel_y], res.shape[0])
    if stacked.shape[1]:
        null = kernel(stacked)[:n]
    else:
        null = zeros(n, 0)
    induced = induction_to_point(functor, hyper_p_set(y, p))
    verdict = is_surjective_localized(hstack([null, induced, top.relations], n), p)
    return CoverReport(p, null.shape[1], verdict)


@dataclass(frozen=True, eq=False)
class GeneratingElement:
    """a in A(X) ⊗ R whose induction to the point acts as the identity on M(•)."""

    gset: GSet
    locale: Locale
    coefficients: tuple[Fraction, ...]

    def element(self) -> BurnsideElement:
        return burnside_ring(self.gset).element(list(self.coefficients))

    def to_dict(self) -> dict[str, Any]:
        return {"locale": self.locale, **self.element().to_dict()}


def generating_element(m: MackeyData | GreenRingData, x: GSet, locale: Locale = 2) -> GeneratingElement:
    """Solve sum_k a_k act(p_* e_k) = identity on M(•) for a in A(X) ⊗ R.

    Works on pre-functors too, since only the action on M(•) is used.

    Raises:
        InfeasibleError: If no solution exists with the requested denominators.
    """
    functor = _functor_of(m)
    top = functor.values[-1]
    n = top.n_generators
    ring = burnside_ring(x)
    point_ring = burnside_ring(GSet.point(x.group))
    system = zeros(n * n, ring.rank)
    for k, orbit in enumerate(ring.basis):
        act = action_matrix(point_ring.basis_element(orbit.global_class), functor)
        system[:, k] = act.T.reshape(-1)
    # column j of the identity may differ from the action by relations
    slack = block_diagonal([top.relations] * n) if n else zeros(0, 0)
    full = hstack([system, slack], n * n)
    rhs = identity(n).T.reshape(-1)
    if locale == INTEGRAL:
        found = solve_integral(full, rhs)
        if found is None:
            raise InfeasibleError(f"No integral generating element on {x.describe()}")
        coeffs = tuple(Fraction(int(v)) for v in found[: ring.rank])
    else:
        solution = solve_localized(full, rhs, int(locale))
        if not solution.feasible:
            raise InfeasibleError(
                f"No {locale}-local generating element on {x.describe()}", solution.certificate
            )
        coeffs = tuple(solution.x[: ring.rank])
    return GeneratingElement(x, locale, coeffs)


@dataclass(frozen=True)
class CoefficientTable:
    """a_H with sum_H a_H Ind_H^G Res^H_G = 1 on M(•) ⊗ Z_(p)."""

    prime: int
    family: Family
    coefficients: dict[int, Fraction]
    verified: bool = False
    labels: dict[int, str] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "prime": self.prime,
            "family": self.family.to_dict(),
            "verified": self.verified,
            "coefficients": [
                {
                    "class": self.labels.get(c, str(c)),
                    "num": value.numerator,
                    "den": value.denominator,
                }
                for c, value in sorted(self.coefficients.items())
            ],
        }


def _columns_in_relations(top_relations: IntMatrix, matrix: IntMatrix, p: int) -> bool:
    for j in range(matrix.shape[1]):
        col = matrix[:, j]
        if all(v == 0 for v in col):
            continue
        if top_relations.shape[1] == 0 or not solve_localized(top_relations, col, p).feasible:
            return False
    return True


def induction_coefficients(m: MackeyData | GreenRingData, f: Family, p: int) -> CoefficientTable:
    """Rational a_H (H in f, denominators prime to p) with sum a_H Ind Res = 1 on M(•)_(p).

    Args:
        m: A validated Mackey functor or Green ring.
        f: A hyper_p-closed family.
        p: The prime.

    Raises:
        FamilyError: If f is not hyper_p-closed.
        NotGeneratingError: If f fails to generate A_M at p.
        InfeasibleError: If the p-local solve has no solution.
    """
    if hyper_p_closure(f, p).members != f.members:
        raise FamilyError(f"Family is not hyper_{p}-closed")
    functor = _functor_of(m)
    data = bqgr(functor)
    x = gset_of_family(f)
    verdict = is_generating(data.ring, x, p)
    if not verdict.surjective:
        raise NotGeneratingError(
            f"{x.describe()} does not generate A_{functor.name} at {p} "
            f"(cokernel {verdict.invariants.describe()})"
        )
    group = x.group
    top = len(group.lattice) - 1
    induction = induction_to_point(data.ring.base, x)
    ideal = data.ideals[top]
    solution = solve_localized(
        hstack([induction, ideal], induction.shape[0]), data.ring.units[top], p
    )
    if not solution.feasible:
        raise InfeasibleError(f"Unit of A_{functor.name} is not induced from the family at {p}",
                              solution.certificate)
    ring = burnside_ring(x)
    coefficients: dict[int, Fraction] = {}
    for k, orbit in enumerate(ring.basis):
        value = solution.x[k]
        if value != 0:
            coefficients[orbit.global_class] = coefficients.get(orbit.global_class, Fraction(0)) + value
    coefficients = {c: v for c, v in coefficients.items() if v != 0}

    # sum a_H [G/H] must act as 1 on M(•) up to relations, after clearing denominators
    point_ring = burnside_ring(GSet.point(group))
    values = functor.values[top]
    n = values.n_generators
    scale = lcm(*(v.denominator for v in coefficients.values())) if coefficients else 1
    defect = -scale * identity(n)
    for c, value in coefficients.items():
        act = action_matrix(point_ring.basis_element(c), functor)
        defect = defect + int(value * scale) * act
    verified = _columns_in_relations(values.relations, defect, p)
    labels = {c: group.lattice.classes[c].label for c in coefficients}
    logger.info(f"Induction coefficients at {p} for {functor.name}: {len(coefficients)} classes, "
                f"verified={verified}")
    return CoefficientTable(p, f, coefficients, verified, labels)


def coefficient_action(table: CoefficientTable, m: MackeyData | GreenRingData) -> IntMatrix:
    """sum a_H Ind_H^G Res^H_G on the generators of M(•), with rational entries."""
    functor = _functor_of(m)
    group = functor.group
    point_ring = burnside_ring(GSet.point(group))
    n = functor.values[-1].n_generators
    out = zeros(n, n)
    for c, value in table.coefficients.items():
        out = out + value * action_matrix(point_ring.basis_element(c), functor)
    return out
