"""The Burnside ring A(S) of G-sets over a base G-set S.

A transitive G-set over S is G/K -> S with eK landing in an orbit G/H_i of
S, so up to isomorphism it is an orbit index i together with an
H_i-conjugacy class of subgroups K <= H_i. These pairs are the basis of
A(S); in particular A(G/H) is the Burnside ring of H.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING, Any

import numpy as np

from .exceptions import SiteMismatchError
from .groups import Group, Subgroup
from .gsets import GMap, GSet, canonical_representative, coset_space, pullback
from .zlocal import IntMatrix, mat_mul, zeros

if TYPE_CHECKING:
    from .mackey import MackeyData

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrbitOverS:
    """Basis element [G/K -> S]: K a local class representative inside H_instance."""

    instance: int
    local: int
    subgroup: Subgroup
    global_class: int
    element: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "instance": self.instance,
            "local": self.local,
            "subgroup": list(self.subgroup.elements),
            "class": self.global_class,
        }


class BurnsideRing:
    """A(S) with its basis, products and the induction/restriction matrices."""

    def __init__(self, site: GSet):
        self.site = site
        self.group = site.group
        lattice = self.group.lattice
        basis: list[OrbitOverS] = []
        starts: list[int] = []
        for i in range(len(site.instances)):
            h = site.rep(i)
            starts.append(len(basis))
            for ell, k in enumerate(lattice.local_classes(h).representatives):
                cls, c = lattice.locate(k)
                basis.append(OrbitOverS(i, ell, k, cls, canonical_representative(c, h)))
        self.basis = tuple(basis)
        self.starts = tuple(starts)
        self.rank = len(basis)

    def __repr__(self) -> str:
        return f"BurnsideRing({self.site!r}, rank={self.rank})"

    def basis_map(self, k: int) -> GMap:
        """The structure map G/L -> S of basis element k (L the G-class representative)."""
        b = self.basis[k]
        source = GSet.transitive(self.group, b.global_class)
        return GMap(source, self.site, ((b.instance, b.element),))

    def classify(self, f: GMap) -> np.ndarray:
        """Coordinates of a G-set over S, given by its structure map."""
        if f.target != self.site:
            raise SiteMismatchError("G-set is not over this site")
        group = self.group
        lattice = group.lattice
        vec = np.zeros(self.rank, dtype=object)
        for j, i, tm in f.components():
            rep = f.source.rep(j)
            g_inv = group.inv(tm.element)
            inside = group.conjugate_set(rep.elements, g_inv)
            ell, _ = lattice.local_classes(self.site.rep(i)).locate(inside)
            vec[self.starts[i] + ell] += 1
        return vec

    def element(self, coeffs: Sequence[Any]) -> "BurnsideElement":
        vec = np.zeros(self.rank, dtype=object)
        if len(coeffs) != self.rank:
            raise SiteMismatchError(f"{len(coeffs)} coefficients for a basis of size {self.rank}")
        for k, value in enumerate(coeffs):
            vec[k] = value
        return BurnsideElement(self, vec)

    def zero(self) -> "BurnsideElement":
        return self.element([0] * self.rank)

    def basis_element(self, k: int) -> "BurnsideElement":
        coeffs = [0] * self.rank
        coeffs[k] = 1
        return self.element(coeffs)

    @cached_property
    def unit_vector(self) -> np.ndarray:
        """[S = S]: the top local class of every orbit."""
        vec = np.zeros(self.rank, dtype=object)
        for i in range(len(self.site.instances)):
            end = self.starts[i + 1] if i + 1 < len(self.starts) else self.rank
            vec[end - 1] = 1
        return vec

    def unit(self) -> "BurnsideElement":
        return BurnsideElement(self, self.unit_vector.copy())

    @cached_property
    def product_tensor(self) -> np.ndarray:
        """T[a, b, c] = coefficient of basis c in basis a times basis b."""
        out = np.zeros((self.rank,) * 3, dtype=object)
        for i, cls in enumerate(self.site.instances):
            local = _transitive_product(self.group, cls)
            s = self.starts[i]
            n = local.shape[0]
            out[s:s + n, s:s + n, s:s + n] = local
        return out

    def multiply_vectors(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        t = self.product_tensor
        out = np.zeros(self.rank, dtype=object)
        for i in np.flatnonzero(a != 0):
            for j in np.flatnonzero(b != 0):
                out = out + a[i] * b[j] * t[i, j]
        return out

    def induction_matrix(self, f: GMap) -> IntMatrix:
        """rank(A(T)) x rank(A(S)) matrix of f_*, f: S -> T."""
        if f.source != self.site:
            raise SiteMismatchError("Induction along a map that does not start at this site")
        target = burnside_ring(f.target)
        out = zeros(target.rank, self.rank)
        for k in range(self.rank):
            out[:, k] = target.classify(f.compose(self.basis_map(k)))
        return out

    def restriction_matrix(self, f: GMap) -> IntMatrix:
        """rank(A(S)) x rank(A(T)) matrix of f^*, f: S -> T."""
        if f.source != self.site:
            raise SiteMismatchError("Restriction along a map that does not start at this site")
        target = burnside_ring(f.target)
        out = zeros(self.rank, target.rank)
        for k in range(target.rank):
            out[:, k] = self.classify(pullback(target.basis_map(k), f).right)
        return out

    def labels(self) -> list[str]:
        classes = self.group.lattice.classes
        return [
            f"[G/{classes[b.global_class].label} -> orbit {b.instance}]"
            if len(self.site.instances) > 1 else f"[G/{classes[b.global_class].label}]"
            for b in self.basis
        ]

    def to_dict(self) -> dict[str, Any]:
        return {"site": self.site.to_dict(), "basis": [b.to_dict() for b in self.basis]}


@lru_cache(maxsize=None)
def burnside_ring(site: GSet) -> BurnsideRing:
    return BurnsideRing(site)


@lru_cache(maxsize=None)
def _transitive_product(group: Group, class_index: int) -> np.ndarray:
    ring = burnside_ring(GSet.transitive(group, class_index))
    n = ring.rank
    out = np.zeros((n, n, n), dtype=object)
    for a in range(n):
        fa = ring.basis_map(a)
        for b in range(a, n):
            fb = ring.basis_map(b)
            square = pullback(fa, fb)
            vec = ring.classify(fa.compose(square.left))
            out[a, b] = vec
            out[b, a] = vec
    logger.debug(f"Burnside product of {group.lattice.classes[class_index].label}: rank {n}")
    return out


@dataclass(frozen=True, eq=False)
class BurnsideElement:
    """A virtual G-set over S as integer (or Z_(p)) coefficients on basis(S)."""

    ring: BurnsideRing
    coeffs: np.ndarray

    @property
    def site(self) -> GSet:
        return self.ring.site

    def _check(self, other: "BurnsideElement") -> None:
        if other.ring.site != self.ring.site:
            raise SiteMismatchError("Burnside elements over different sites")

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        self._check(other)
        return BurnsideElement(self.ring, self.coeffs + other.coeffs)

    def __sub__(self, other: "BurnsideElement") -> "BurnsideElement":
        self._check(other)
        return BurnsideElement(self.ring, self.coeffs - other.coeffs)

    def __neg__(self) -> "BurnsideElement":
        return BurnsideElement(self.ring, -self.coeffs)

    def __mul__(self, other: Any) -> "BurnsideElement":
        if isinstance(other, BurnsideElement):
            return multiply(self, other)
        return BurnsideElement(self.ring, self.coeffs * other)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BurnsideElement)
            and other.ring.site == self.ring.site
            and all(a == b for a, b in zip(self.coeffs, other.coeffs, strict=True))
        )

    def __hash__(self) -> int:
        return hash((self.ring.site, tuple(self.coeffs)))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def describe(self) -> str:
        terms = [
            (f"{c}*{label}" if c != 1 else label)
            for c, label in zip(self.coeffs, self.ring.labels(), strict=True)
            if c != 0
        ]
        return " + ".join(terms) if terms else "0"

    def to_dict(self) -> dict[str, Any]:
        return {
            "coefficients": [_json_number(c) for c in self.coeffs],
            "text": self.describe(),
        }


def _json_number(value: Any) -> Any:
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else {"num": value.numerator, "den": value.denominator}
    return int(value)


def basis(s: GSet) -> list[OrbitOverS]:
    return list(burnside_ring(s).basis)


def unit(s: GSet) -> BurnsideElement:
    return burnside_ring(s).unit()


def induce(a: BurnsideElement, phi: GMap) -> BurnsideElement:
    """phi_*(a) for phi: S -> T: compose structure maps with phi."""
    matrix = a.ring.induction_matrix(phi)
    return BurnsideElement(burnside_ring(phi.target), mat_mul(matrix, a.coeffs.reshape(-1, 1))[:, 0])


def restrict(a: BurnsideElement, phi: GMap) -> BurnsideElement:
    """phi^*(a) for a over T and phi: S -> T: pull back along phi."""
    if a.site != phi.target:
        raise SiteMismatchError("Restriction of an element that does not live on the map's target")
    ring = burnside_ring(phi.source)
    matrix = ring.restriction_matrix(phi)
    return BurnsideElement(ring, mat_mul(matrix, a.coeffs.reshape(-1, 1))[:, 0])


def multiply(a: BurnsideElement, b: BurnsideElement) -> BurnsideElement:
    """Fibre product over S."""
    a._check(b)
    return BurnsideElement(a.ring, a.ring.multiply_vectors(a.coeffs, b.coeffs))


@lru_cache(maxsize=None)
def table_of_marks(group: Group) -> IntMatrix:
    """M[K, H] = |(G/K)^H| over class representatives; lower triangular."""
    lattice = group.lattice
    n = len(lattice)
    out = zeros(n, n)
    for k in range(n):
        space = coset_space(lattice.rep(k))
        span = np.arange(len(space))
        for h in range(k + 1):
            elems = np.array(lattice.rep(h).elements, dtype=np.int64)
            fixed = np.all(space.action[elems] == span[None, :], axis=0)
            out[k, h] = int(fixed.sum())
    logger.info(f"{group.name}: table of marks of size {n}")
    return out


def marks(a: BurnsideElement) -> np.ndarray:
    """Fixed-point counts of a virtual G-set, indexed by subgroup class."""
    site = a.site
    if site != GSet.point(site.group):
        raise SiteMismatchError("Marks are defined on A(point) only")
    return mat_mul(a.coeffs.reshape(1, -1), table_of_marks(site.group))[0]


@lru_cache(maxsize=None)
def local_table_of_marks(h: Subgroup) -> IntMatrix:
    """|(H/K)^L| over the local classes of H (rows K, columns L)."""
    group = h.group
    local = group.lattice.local_classes(h)
    n = len(local)
    out = zeros(n, n)
    for r, k in enumerate(local.representatives):
        inside = k.element_set
        for c, ell in enumerate(local.representatives):
            count = sum(
                1 for x in h.elements
                if all(group.conj(group.inv(x), y) in inside for y in ell.elements)
            )
            out[r, c] = count // k.order
    return out


@lru_cache(maxsize=None)
def _basis_actions(m: "MackeyData", site: GSet) -> tuple[IntMatrix, ...]:
    ring = burnside_ring(site)
    out = []
    for k in range(ring.rank):
        f = ring.basis_map(k)
        out.append(mat_mul(m.covariant(f), m.contravariant(f)))
    return tuple(out)


def action_matrix(a: BurnsideElement, m: "MackeyData") -> np.ndarray:
    """Matrix of a acting on the generators of M(S): sum of a_k f_* f^*."""
    if a.ring.group is not m.group:
        raise SiteMismatchError("Burnside element and functor live over different groups")
    n = m.evaluate(a.site).n_generators
    out = zeros(n, n)
    for k, matrix in enumerate(_basis_actions(m, a.site)):
        if a.coeffs[k] != 0:
            out = out + a.coeffs[k] * matrix
    return out


def act(a: BurnsideElement, m: "MackeyData", x: Sequence[Any]) -> np.ndarray:
    """a . x for x a generator-coordinate vector of M(S)."""
    vec = np.array(list(x), dtype=object).reshape(-1, 1)
    return mat_mul(action_matrix(a, m), vec)[:, 0]
