"""Bifree bisets between subgroups of G and the functor j from G-sets to bisets.

A transitive bifree (H2, H1)-biset is H2 x_A H1 for a subgroup A <= H1 and
a monomorphism f: A -> H2, with stabilizer {(f(a), a)} at the base point.
It is stored as the sorted pairs (a, f(a)), canonical under conjugation by
H2 x H1. Morphisms H1 -> H2 are integer combinations of these.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as cartesian
from typing import Any

import numpy as np

from .exceptions import (
    BifreenessError,
    BurnsideError,
    ConfigError,
    HomomorphismError,
    ShapeMismatchError,
    SiteMismatchError,
)
from .groups import Group, Orientation, Subgroup
from .gsets import GMap, coset_space, transitive_maps
from .mackey import (
    AbGroupPresentation,
    MackeyData,
    ValidationReport,
    validate_mackey,
)
from .zlocal import IntMatrix, identity, zeros

logger = logging.getLogger(__name__)

Pairs = tuple[tuple[int, int], ...]


def _check_graph(left: Subgroup, right: Subgroup, pairs: Pairs) -> None:
    group = left.group
    mapping = dict(pairs)
    if len(mapping) != len(pairs):
        raise HomomorphismError("Graph assigns two images to one element")
    domain = tuple(sorted(mapping))
    if group.generate(domain) != domain:
        raise HomomorphismError(f"Domain {domain} is not a subgroup")
    if not set(domain) <= right.element_set:
        raise HomomorphismError("Domain is not inside the right group")
    if not set(mapping.values()) <= left.element_set:
        raise HomomorphismError("Image is not inside the left group")
    for a in domain:
        for b in domain:
            if mapping[group.mul(a, b)] != group.mul(mapping[a], mapping[b]):
                raise HomomorphismError(f"Map is not multiplicative at ({a}, {b})")
    if len(set(mapping.values())) != len(domain):
        raise BifreenessError("Map on the domain is not injective, so the biset is not left-free")


@dataclass(frozen=True)
class BifreeBiset:
    """The transitive bifree biset H2 x_A H1 in canonical form.

    `left` is H2, `right` is H1 and `graph` the sorted pairs (a, f(a)),
    lexicographically least over the (H2, H1)-conjugates of the stabilizer.
    """

    left: Subgroup
    right: Subgroup
    graph: Pairs

    @property
    def group(self) -> Group:
        return self.left.group

    @classmethod
    def canonical(cls, left: Subgroup, right: Subgroup, pairs: Pairs | list[tuple[int, int]]) -> "BifreeBiset":
        """Canonical representative of the biset with stabilizer {(f(a), a)}.

        Raises:
            HomomorphismError: If the pairs are not the graph of a homomorphism A -> H2.
            BifreenessError: If that homomorphism is not injective.
        """
        pairs = tuple(sorted(pairs))
        _check_graph(left, right, pairs)
        group = left.group
        best: Pairs | None = None
        for v in right.elements:
            moved = [(group.conj(v, a), fa) for a, fa in pairs]
            for u in left.elements:
                candidate = tuple(sorted((a, group.conj(u, fa)) for a, fa in moved))
                if best is None or candidate < best:
                    best = candidate
        assert best is not None
        return cls(left, right, best)

    @classmethod
    def identity(cls, h: Subgroup) -> "BifreeBiset":
        return cls.canonical(h, h, [(x, x) for x in h.elements])

    @cached_property
    def mapping(self) -> dict[int, int]:
        return dict(self.graph)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.graph)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(fa for _, fa in self.graph))

    @property
    def size(self) -> int:
        return self.left.order * self.right.order // len(self.graph)

    def describe(self) -> str:
        labels = self.group.labels
        return (
            f"[{len(self.left.elements)} <- {len(self.right.elements)}, "
            f"A of order {len(self.graph)}: "
            + ", ".join(f"{labels[a]}->{labels[fa]}" for a, fa in self.graph)
            + "]"
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "leftGroup": list(self.left.elements),
            "rightGroup": list(self.right.elements),
            "domainSubgroup": list(self.domain),
            "monomorphism": [[a, fa] for a, fa in self.graph],
        }

    @classmethod
    def from_dict(cls, group: Group, data: dict[str, Any]) -> "BifreeBiset":
        try:
            left = group.subgroup(data["leftGroup"])
            right = group.subgroup(data["rightGroup"])
            pairs = [(int(a), int(fa)) for a, fa in data["monomorphism"]]
            domain = sorted(int(a) for a in data["domainSubgroup"])
        except BurnsideError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Malformed biset record: {e!r}") from e
        if sorted(a for a, _ in pairs) != domain:
            raise HomomorphismError("Monomorphism table does not cover the domain subgroup")
        return cls.canonical(left, right, pairs)


def tau_basis(x: BifreeBiset) -> BifreeBiset:
    """The opposite biset: H1 on the left, H2 on the right, graph transposed."""
    return BifreeBiset.canonical(x.right, x.left, [(fa, a) for a, fa in x.graph])


@dataclass(frozen=True)
class BisetMorphism:
    """An integer combination of transitive bifree bisets from `source` to `target`."""

    source: Subgroup
    target: Subgroup
    terms: tuple[tuple[BifreeBiset, int], ...] = ()

    @classmethod
    def of(
        cls, source: Subgroup, target: Subgroup, counts: dict[BifreeBiset, int] | Counter
    ) -> "BisetMorphism":
        for b in counts:
            if b.right != source or b.left != target:
                raise SiteMismatchError(f"Biset {b.describe()} does not go from source to target")
        terms = tuple(
            sorted(((b, int(n)) for b, n in counts.items() if n), key=lambda t: t[0].graph)
        )
        return cls(source, target, terms)

    @classmethod
    def basis(cls, b: BifreeBiset) -> "BisetMorphism":
        return cls(b.right, b.left, ((b, 1),))

    @classmethod
    def zero(cls, source: Subgroup, target: Subgroup) -> "BisetMorphism":
        return cls(source, target, ())

    @classmethod
    def identity(cls, h: Subgroup) -> "BisetMorphism":
        return cls.basis(BifreeBiset.identity(h))

    def counts(self) -> Counter:
        return Counter(dict(self.terms))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _same_ends(self, other: "BisetMorphism") -> None:
        if self.source != other.source or self.target != other.target:
            raise SiteMismatchError("Biset morphisms between different subgroups")

    def __add__(self, other: "BisetMorphism") -> "BisetMorphism":
        self._same_ends(other)
        total = self.counts()
        for b, n in other.terms:
            total[b] += n
        return BisetMorphism.of(self.source, self.target, total)

    def __neg__(self) -> "BisetMorphism":
        return BisetMorphism(self.source, self.target, tuple((b, -n) for b, n in self.terms))

    def __sub__(self, other: "BisetMorphism") -> "BisetMorphism":
        return self + (-other)

    def __rmul__(self, scalar: int) -> "BisetMorphism":
        return BisetMorphism.of(self.source, self.target, {b: scalar * n for b, n in self.terms})

    def __matmul__(self, other: "BisetMorphism") -> "BisetMorphism":
        return balanced_product(self, other)

    def describe(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{n}*{b.describe()}" for b, n in self.terms)

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": list(self.source.elements),
            "target": list(self.target.elements),
            "terms": [{"coefficient": n, "biset": b.to_dict()} for b, n in self.terms],
        }


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------


def double_coset_representatives(h: Subgroup, left: tuple[int, ...], right: tuple[int, ...]) -> list[int]:
    """Least element of each double coset left \\ h / right."""
    group = h.group
    seen: set[int] = set()
    reps = []
    for x in h.elements:
        if x in seen:
            continue
        reps.append(x)
        for b in left:
            bx = group.mul(b, x)
            seen.update(group.mul(bx, c) for c in right)
    return reps


def _compose_basis(x: BifreeBiset, y: BifreeBiset) -> Counter:
    """x ×_{H2} y as a sum over B \\ H2 / f(A) of graphs a -> g(h f(a) h^-1)."""
    group = x.group
    b_set = x.mapping
    out: Counter = Counter()
    for h in double_coset_representatives(x.right, x.domain, y.image):
        pairs = []
        for a, fa in y.graph:
            c = group.conj(h, fa)
            if c in b_set:
                pairs.append((a, b_set[c]))
        out[BifreeBiset.canonical(x.left, y.right, pairs)] += 1
    return out


def balanced_product(x: BisetMorphism, y: BisetMorphism) -> BisetMorphism:
    """x ∘ y = x ×_{H2} y for y: H1 -> H2 and x: H2 -> H3, extended bilinearly.

    Raises:
        SiteMismatchError: If the middle groups differ.
    """
    if x.source != y.target:
        raise SiteMismatchError("Balanced product over different middle groups")
    total: Counter = Counter()
    for bx, nx in x.terms:
        for by, ny in y.terms:
            for b, n in _compose_basis(bx, by).items():
                total[b] += nx * ny * n
    return BisetMorphism.of(y.source, x.target, total)


def tau(x: BisetMorphism) -> BisetMorphism:
    """The anti-involution of the biset category."""
    return BisetMorphism.of(x.target, x.source, {tau_basis(b): n for b, n in x.terms})


# ---------------------------------------------------------------------------
# explicit bisets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExplicitBiset:
    """A finite biset by action tables.

    Row i of `left_action` is the point map of the i-th element of `left`,
    row i of `right_action` the map p -> p·t for the i-th element t of `right`.
    """

    left: Subgroup
    right: Subgroup
    left_action: np.ndarray
    right_action: np.ndarray

    def __post_init__(self) -> None:
        if self.left_action.shape[0] != self.left.order or self.right_action.shape[0] != self.right.order:
            raise ShapeMismatchError("Action tables do not match the acting groups")
        if self.left_action.shape[1] != self.right_action.shape[1]:
            raise ShapeMismatchError("Left and right action tables act on different point sets")

    @property
    def n_points(self) -> int:
        return int(self.left_action.shape[1])


def _positions(group: Group, h: Subgroup) -> np.ndarray:
    pos = np.full(group.order, -1, dtype=np.int64)
    pos[list(h.elements)] = np.arange(h.order)
    return pos


def materialize(b: BifreeBiset) -> ExplicitBiset:
    """H2 x_A H1 as explicit points [w, v] with [w f(a), v] = [w, a v]."""
    group = b.group
    table = group.table
    left = np.array(b.left.elements, dtype=np.int64)
    right = np.array(b.right.elements, dtype=np.int64)
    lpos, rpos = _positions(group, b.left), _positions(group, b.right)
    nl, nr = len(left), len(right)
    ws = np.repeat(left, nr)
    vs = np.tile(right, nl)
    images = np.stack([
        lpos[table[ws, group.inv(fa)]] * nr + rpos[table[a, vs]] for a, fa in b.graph
    ])
    rep = images.min(axis=0)
    points = np.unique(rep)
    point_of = np.searchsorted(points, rep)
    w_rep, v_rep = left[points // nr], right[points % nr]
    left_action = np.stack([
        point_of[lpos[table[u, w_rep]] * nr + points % nr] for u in left
    ])
    right_action = np.stack([
        point_of[(points // nr) * nr + rpos[table[v_rep, t]]] for t in right
    ])
    return ExplicitBiset(b.left, b.right, left_action, right_action)


def decompose(e: ExplicitBiset) -> BisetMorphism:
    """Split an explicit biset into transitive canonical forms.

    Raises:
        BifreenessError: If some orbit has a point with a non-trivial one-sided stabilizer.
    """
    left_min = e.left_action.min(axis=0)
    orbit_min = left_min[e.right_action].min(axis=0)
    counts: Counter = Counter()
    left, right = e.left.elements, e.right.elements
    for base in np.unique(orbit_min):
        stab = np.argwhere(e.left_action[:, base][:, None] == e.right_action[:, base][None, :])
        # element 0 is the identity and sits first in each sorted subgroup
        if int(np.sum(stab[:, 1] == 0)) != 1 or int(np.sum(stab[:, 0] == 0)) != 1:
            raise BifreenessError(f"Orbit of point {int(base)} is not bifree")
        pairs = [(right[t], left[u]) for u, t in stab.tolist()]
        counts[BifreeBiset.canonical(e.left, e.right, pairs)] += 1
    return BisetMorphism.of(e.right, e.left, counts)


def materialized_balanced_product(x: BifreeBiset, y: BifreeBiset) -> BisetMorphism:
    """x ×_{H2} y built point by point, as an independent check of the composition law."""
    if x.right != y.left:
        raise SiteMismatchError("Balanced product over different middle groups")
    group = x.group
    ex, ey = materialize(x), materialize(y)
    middle = x.right
    inv_pos = _positions(group, middle)[[group.inv(h) for h in middle.elements]]
    nx, ny = ex.n_points, ey.n_points
    xs = np.repeat(np.arange(nx), ny)
    ys = np.tile(np.arange(ny), nx)
    # h.(p, q) = (p h^-1, h q) runs through the class of (p, q)
    images = ex.right_action[inv_pos][:, xs] * ny + ey.left_action[:, ys]
    rep = images.min(axis=0)
    points = np.unique(rep)
    point_of = np.searchsorted(points, rep)
    px, py = points // ny, points % ny
    left_action = point_of[ex.left_action[:, px] * ny + py[None, :]]
    right_action = point_of[px[None, :] * ny + ey.right_action[:, py]]
    logger.debug(f"Materialized balanced product: {nx} x {ny} pairs, {len(points)} classes")
    return decompose(ExplicitBiset(x.left, y.right, left_action, right_action))


def perm_biset_product(k: Subgroup, x: BifreeBiset) -> BisetMorphism:
    """H/K × X with the diagonal left action, as an (H, H)-biset.

    Raises:
        SiteMismatchError: If X is not an (H, H)-biset with K <= H.
        BifreenessError: If an orbit of the product is not bifree.
    """
    h = x.left
    if x.right != h or not k.issubset(h):
        raise SiteMismatchError("Permutation product needs an (H, H)-biset and K <= H")
    space = coset_space(k)
    ex = materialize(x)
    # H/K as an H-set, restricted to the orbit of eK under H
    orbit = sorted({int(space.action[u, 0]) for u in h.elements})
    index = {c: i for i, c in enumerate(orbit)}
    n_cos = len(orbit)
    coset_action = np.array(
        [[index[int(space.action[u, c])] for c in orbit] for u in h.elements], dtype=np.int64
    )
    nq = ex.n_points
    cs = np.repeat(np.arange(n_cos), nq)
    qs = np.tile(np.arange(nq), n_cos)
    left_action = coset_action[:, cs] * nq + ex.left_action[:, qs]
    right_action = cs[None, :] * nq + ex.right_action[:, qs]
    return decompose(ExplicitBiset(h, h, left_action, right_action))


# ---------------------------------------------------------------------------
# the functor j
# ---------------------------------------------------------------------------


def j_lower_transitive(group: Group, source: int, target: int, g: int) -> BifreeBiset:
    """K as a (K, H)-biset with H acting on the right through h -> g^-1 h g."""
    lattice = group.lattice
    h, k = lattice.rep(source), lattice.rep(target)
    g_inv = group.inv(g)
    return BifreeBiset.canonical(k, h, [(a, group.conj(g_inv, a)) for a in h.elements])


def j_lower(f: GMap) -> BisetMorphism:
    """j_*(f) for a G-map between transitive G-sets.

    Raises:
        SiteMismatchError: If source or target is not transitive.
    """
    if len(f.source.instances) != 1 or len(f.target.instances) != 1:
        raise SiteMismatchError("j_lower takes a map of transitive G-sets; use j_lower_matrix")
    _, g = f.assignment[0]
    group = f.source.group
    return BisetMorphism.basis(
        j_lower_transitive(group, f.source.instances[0], f.target.instances[0], g)
    )


def j_upper(f: GMap) -> BisetMorphism:
    return tau(j_lower(f))


def j(f: GMap, upper: bool = False) -> BisetMorphism:
    return j_upper(f) if upper else j_lower(f)


def j_lower_matrix(f: GMap) -> list[list[BisetMorphism]]:
    """j_*(f) orbitwise: entry [t][s] is the image of source orbit s in target orbit t."""
    group = f.source.group
    lattice = group.lattice
    rows = []
    for t, kc in enumerate(f.target.instances):
        row = []
        for s, hc in enumerate(f.source.instances):
            tj, g = f.assignment[s]
            if tj == t:
                row.append(BisetMorphism.basis(j_lower_transitive(group, hc, kc, g)))
            else:
                row.append(BisetMorphism.zero(lattice.rep(hc), lattice.rep(kc)))
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# homomorphisms between subgroups
# ---------------------------------------------------------------------------


def _generators(h: Subgroup) -> list[int]:
    group = h.group
    gens: list[int] = []
    span: tuple[int, ...] = (0,)
    for x in h.elements:
        if x not in span:
            gens.append(x)
            span = group.generate(gens)
    return gens


def _extend(group: Group, gens: list[int], images: tuple[int, ...]) -> dict[int, int] | None:
    mapping = {0: 0}
    frontier = [0]
    for x in frontier:
        for s, t in zip(gens, images, strict=True):
            y = group.mul(x, s)
            fy = group.mul(mapping[x], t)
            if y in mapping:
                if mapping[y] != fy:
                    return None
            else:
                mapping[y] = fy
                frontier.append(y)
    return mapping


def injective_homomorphisms(source: Subgroup, target: Subgroup) -> list[dict[int, int]]:
    """Every monomorphism source -> target, as element tables."""
    group = source.group
    gens = _generators(source)
    out = []
    for images in cartesian(target.elements, repeat=len(gens)):
        mapping = _extend(group, gens, images)
        if mapping is not None and len(set(mapping.values())) == len(mapping):
            out.append(mapping)
    return out


def bifree_bisets(left: Subgroup, right: Subgroup) -> list[BifreeBiset]:
    """Every transitive bifree (left, right)-biset, each canonical form once."""
    group = left.group
    lattice = group.lattice
    found: set[BifreeBiset] = set()
    for a in lattice.subgroups_of(right):
        for mapping in injective_homomorphisms(a, left):
            found.add(BifreeBiset.canonical(left, right, list(mapping.items())))
    return sorted(found, key=lambda b: b.graph)


# ---------------------------------------------------------------------------
# Mackey functors through j
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BisetFixture:
    """A functor on bifree bisets: the Burnside rings A(H) with X ↦ X ×_{H1} -.

    A(H) has the local subgroup classes of H as basis. Subclasses change the
    values or twist the structure maps.
    """

    group: Group
    name: str = "burnside"
    _cache: dict[Any, IntMatrix] = field(default_factory=dict, init=False, repr=False)

    def rank(self, h: Subgroup) -> int:
        return len(self.group.lattice.local_classes(h))

    def apply(self, x: BifreeBiset) -> IntMatrix:
        """Matrix of [H1/L] -> sum over v in A \\ H1 / L of [H2 / f(A ∩ v L v^-1)]."""
        if x in self._cache:
            return self._cache[x]
        group = self.group
        lattice = group.lattice
        source = lattice.local_classes(x.right)
        target = lattice.local_classes(x.left)
        out = zeros(len(target), len(source))
        domain = set(x.domain)
        for col, sub in enumerate(source.representatives):
            for v in double_coset_representatives(x.right, x.domain, sub.elements):
                meet = [c for c in (group.conj(v, s) for s in sub.elements) if c in domain]
                image = tuple(sorted(x.mapping[c] for c in meet))
                row, _ = target.locate(image)
                out[row, col] += 1
        self._cache[x] = out
        return out

    def apply_morphism(self, x: BisetMorphism) -> IntMatrix:
        out = zeros(self.rank(x.target), self.rank(x.source))
        for b, n in x.terms:
            out = out + n * self.apply(b)
        return out

    def sign(self, g: int) -> int:
        return 1

    def inner(self) -> dict[tuple[int, int], IntMatrix]:
        return {}


@dataclass(frozen=True, eq=False)
class ZeroFixture(BisetFixture):
    name: str = "zero"

    def rank(self, h: Subgroup) -> int:
        return 0

    def apply(self, x: BifreeBiset) -> IntMatrix:
        return zeros(0, 0)


@dataclass(frozen=True, eq=False)
class SignedFixture(BisetFixture):
    """Burnside fixture with the maps along eH -> gK scaled by w(g) and x in H acting by w(x)."""

    omega: Orientation | None = None
    name: str = "signed"

    def sign(self, g: int) -> int:
        return self.omega(g) if self.omega is not None else 1

    def inner(self) -> dict[tuple[int, int], IntMatrix]:
        if self.omega is None:
            return {}
        lattice = self.group.lattice
        return {
            (c.index, x): -identity(self.rank(c.representative))
            for c in lattice.classes
            for x in c.representative.elements
            if self.omega(x) == -1
        }


def mackey_via_j(fixture: BisetFixture) -> MackeyData:
    """The fixture composed with j, tabulated on transitive G-sets."""
    group = fixture.group
    lattice = group.lattice
    ind, res = {}, {}
    for tm in transitive_maps(group):
        lower = j_lower_transitive(group, tm.source, tm.target, tm.element)
        sign = fixture.sign(tm.element)
        ind[tm] = sign * fixture.apply(lower)
        res[tm] = sign * fixture.apply(tau_basis(lower))
    values = tuple(AbGroupPresentation.free(fixture.rank(lattice.rep(c))) for c in range(len(lattice)))
    inner = fixture.inner()
    return MackeyData(
        group=group,
        values=values,
        ind=ind,
        res=res,
        inner=inner,
        name=f"{fixture.name}∘j",
        pre_only=bool(inner),
    )


def mackey_via_j_check(fixture: BisetFixture) -> ValidationReport:
    """Validate the Mackey axioms of fixture ∘ j; empty for genuine biset functors."""
    report = validate_mackey(mackey_via_j(fixture))
    logger.info(f"{fixture.name} through j on {fixture.group.name}: {len(report.defects)} defects")
    return report

