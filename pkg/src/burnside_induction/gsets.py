"""Finite G-sets, G-maps, pullbacks and families of subgroups.

A G-set is stored as a sorted tuple of orbit instances, each naming a
subgroup class; instance i is the coset space G/H_i of the class
representative. Points are numbered instance by instance, cosets within an
instance in order of their minimal element, so the identity coset of every
instance comes first.

A map eH -> gK is recorded by the least element of gK. Since H fixes gK,
the double coset HgK is gK itself, so this is also the least element of
the double coset.
"""

import itertools
import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, NamedTuple

import numpy as np
from sympy import isprime, primefactors

from .exceptions import CapExceededError, FamilyError, GroupSpecError, SiteMismatchError
from .groups import (
    Group,
    Subgroup,
    is_p_elementary,
    is_p_hyperelementary,
    is_hyperelementary,
    o_p,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CosetSpace:
    """Left cosets gH with the induced G-action."""

    subgroup: Subgroup
    reps: np.ndarray
    coset_of: np.ndarray
    action: np.ndarray

    def __len__(self) -> int:
        return len(self.reps)


@lru_cache(maxsize=None)
def coset_space(h: Subgroup) -> CosetSpace:
    g = h.group
    coset_of = np.full(g.order, -1, dtype=np.int64)
    reps = []
    for x in range(g.order):
        if coset_of[x] >= 0:
            continue
        coset_of[[g.mul(x, y) for y in h.elements]] = len(reps)
        reps.append(x)
    rep_arr = np.array(reps, dtype=np.int64)
    action = coset_of[g.table[:, rep_arr]]
    return CosetSpace(h, rep_arr, coset_of, action)


def canonical_representative(g: int, k: Subgroup) -> int:
    """Minimal element of the coset gK (equal to HgK whenever eH -> gK is a G-map)."""
    space = coset_space(k)
    return int(space.reps[space.coset_of[g]])


class GSet:
    """A finite left G-set as a sorted multiset of transitive orbits."""

    def __init__(self, group: Group, instances: Iterable[int] = ()):
        self.group = group
        self.lattice = group.lattice
        self.instances = tuple(sorted(instances))
        for c in self.instances:
            if not 0 <= c < len(self.lattice):
                raise GroupSpecError(f"No subgroup class {c} in {group.name}")
        sizes = [group.order // self.lattice.classes[c].order for c in self.instances]
        self.sizes = tuple(sizes)
        self.offsets = tuple(int(x) for x in np.cumsum([0, *sizes])[:-1])
        self.n_points = sum(sizes)
        if self.n_points > group.limits.max_points:
            raise CapExceededError("G-set point count", self.n_points, group.limits.max_points)

    def __repr__(self) -> str:
        return f"GSet({self.group.name}, {self.describe()})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GSet)
            and other.group is self.group
            and other.instances == self.instances
        )

    def __hash__(self) -> int:
        return hash((id(self.group), self.instances))

    def __len__(self) -> int:
        return self.n_points

    @classmethod
    def point(cls, group: Group) -> "GSet":
        return cls(group, [len(group.lattice) - 1])

    @classmethod
    def transitive(cls, group: Group, class_index: int) -> "GSet":
        return cls(group, [class_index])

    @classmethod
    def free(cls, group: Group) -> "GSet":
        return cls(group, [0])

    @property
    def is_empty(self) -> bool:
        return not self.instances

    def rep(self, i: int) -> Subgroup:
        return self.lattice.rep(self.instances[i])

    def cosets(self, i: int) -> CosetSpace:
        return coset_space(self.rep(i))

    def point_index(self, i: int, coset: int) -> int:
        return self.offsets[i] + coset

    def locate(self, point: int) -> tuple[int, int]:
        """(instance, coset) of a global point index."""
        i = int(np.searchsorted(self.offsets, point, side="right")) - 1
        return i, point - self.offsets[i]

    @cached_property
    def action(self) -> np.ndarray:
        """|G| x n_points table: action[g, x] = g.x."""
        blocks = [self.cosets(i).action + self.offsets[i] for i in range(len(self.instances))]
        if not blocks:
            return np.zeros((self.group.order, 0), dtype=np.int64)
        return np.concatenate(blocks, axis=1)

    def orbit_types(self) -> list[tuple[int, int]]:
        """(class index, multiplicity) pairs in class order."""
        return [(c, len(list(run))) for c, run in itertools.groupby(self.instances)]

    def describe(self) -> str:
        if self.is_empty:
            return "empty"
        labels = self.lattice.classes
        return " + ".join(
            f"{m}*G/{labels[c].label}" if m > 1 else f"G/{labels[c].label}"
            for c, m in self.orbit_types()
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "orbits": [
                {"class": c, "label": self.lattice.classes[c].label, "multiplicity": m}
                for c, m in self.orbit_types()
            ],
            "points": self.n_points,
        }

    @classmethod
    def from_action(cls, group: Group, action: np.ndarray) -> "Decomposition":
        """Split a G-action table (|G| x n) into canonical orbits.

        Each orbit gets a base point whose stabilizer is exactly the class
        representative; `embedding[x]` is the point of the canonical G-set
        corresponding to x.
        """
        lattice = group.lattice
        n = action.shape[1]
        assigned = np.zeros(n, dtype=bool)
        found: list[tuple[int, int]] = []
        for x in range(n):
            if assigned[x]:
                continue
            col = action[:, x]
            stabilizer = tuple(np.flatnonzero(col == x).tolist())
            cls_index, c = lattice.locate(stabilizer)
            found.append((cls_index, int(action[c, x])))
            assigned[col] = True
        order = sorted(range(len(found)), key=lambda k: found[k][0])
        gset = cls(group, [found[k][0] for k in order])
        embedding = np.full(n, -1, dtype=np.int64)
        bases = []
        for i, k in enumerate(order):
            base = found[k][1]
            embedding[action[:, base]] = gset.offsets[i] + gset.cosets(i).coset_of
            bases.append(base)
        return Decomposition(gset, embedding, tuple(bases))


@dataclass(frozen=True, eq=False)
class Decomposition:
    gset: GSet
    embedding: np.ndarray
    bases: tuple[int, ...]


def coproduct(s: GSet, t: GSet) -> tuple[GSet, "GMap", "GMap"]:
    """S + T with its two embeddings."""
    if s.group is not t.group:
        raise SiteMismatchError("Disjoint union of G-sets over different groups")
    union = GSet(s.group, s.instances + t.instances)
    maps = []
    taken: set[int] = set()
    for part in (s, t):
        assignment = []
        for c in part.instances:
            j = next(j for j, d in enumerate(union.instances) if d == c and j not in taken)
            taken.add(j)
            assignment.append((j, 0))
        maps.append(GMap(part, union, tuple(assignment)))
    return union, maps[0], maps[1]


class TransitiveMap(NamedTuple):
    """The G-map G/H -> G/K, eH -> gK, with g canonical (H, K class representatives)."""

    source: int
    target: int
    element: int


@lru_cache(maxsize=None)
def transitive_maps(group: Group) -> tuple[TransitiveMap, ...]:
    """Every G-map between transitive canonical G-sets, in (source, target, g) order."""
    lattice = group.lattice
    out = []
    for h in range(len(lattice)):
        h_elems = np.array(lattice.rep(h).elements, dtype=np.int64)
        for k in range(len(lattice)):
            space = coset_space(lattice.rep(k))
            fixed = np.all(space.action[h_elems] == np.arange(len(space))[None, :], axis=0)
            out.extend(TransitiveMap(h, k, int(space.reps[c])) for c in np.flatnonzero(fixed))
    logger.debug(f"{group.name}: {len(out)} canonical transitive G-maps")
    return tuple(out)


def compose_transitive(group: Group, first: TransitiveMap, second: TransitiveMap) -> TransitiveMap:
    """second o first: eH -> g1 K -> g1 g2 L, with the representative made canonical."""
    if first.target != second.source:
        raise SiteMismatchError("Transitive maps are not composable")
    g = group.mul(first.element, second.element)
    rep = canonical_representative(g, group.lattice.rep(second.target))
    return TransitiveMap(first.source, second.target, rep)


@dataclass(frozen=True, eq=False)
class GMap:
    """A G-map recorded orbitwise: instance i goes to (target instance j, g), f(eH_i) = gK_j."""

    source: GSet
    target: GSet
    assignment: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.source.group is not self.target.group:
            raise SiteMismatchError("G-map between G-sets over different groups")
        if len(self.assignment) != len(self.source.instances):
            raise SiteMismatchError("G-map assignment does not cover every source orbit")
        group = self.source.group
        for i, (j, g) in enumerate(self.assignment):
            h, k = self.source.rep(i), self.target.rep(j)
            if canonical_representative(g, k) != g:
                raise SiteMismatchError(f"Representative {g} is not canonical in its coset")
            if not all(group.conj(group.inv(g), x) in k for x in h.elements):
                raise SiteMismatchError(f"No G-map with eH -> {group.labels[g]}K for orbit {i}")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GMap)
            and self.source == other.source
            and self.target == other.target
            and self.assignment == other.assignment
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.assignment))

    @classmethod
    def transitive(cls, group: Group, tmap: TransitiveMap) -> "GMap":
        return cls(
            GSet.transitive(group, tmap.source),
            GSet.transitive(group, tmap.target),
            ((0, tmap.element),),
        )

    @classmethod
    def identity(cls, s: GSet) -> "GMap":
        return cls(s, s, tuple((i, 0) for i in range(len(s.instances))))

    @classmethod
    def to_point(cls, s: GSet) -> "GMap":
        return cls(s, GSet.point(s.group), tuple((0, 0) for _ in s.instances))

    @classmethod
    def from_point_map(cls, source: GSet, target: GSet, point_map: np.ndarray) -> "GMap":
        assignment = []
        for i in range(len(source.instances)):
            j, c = target.locate(int(point_map[source.offsets[i]]))
            assignment.append((j, int(target.cosets(j).reps[c])))
        result = cls(source, target, tuple(assignment))
        if not np.array_equal(result.point_map, point_map):
            raise SiteMismatchError("Point map is not G-equivariant")
        return result

    @cached_property
    def point_map(self) -> np.ndarray:
        table = self.source.group.table
        out = np.zeros(self.source.n_points, dtype=np.int64)
        for i, (j, g) in enumerate(self.assignment):
            src = self.source.cosets(i)
            tgt = self.target.cosets(j)
            start = self.source.offsets[i]
            out[start:start + len(src)] = self.target.offsets[j] + tgt.coset_of[table[src.reps, g]]
        return out

    def components(self) -> Iterator[tuple[int, int, TransitiveMap]]:
        """(source instance, target instance, canonical transitive map) per orbit."""
        for i, (j, g) in enumerate(self.assignment):
            yield i, j, TransitiveMap(self.source.instances[i], self.target.instances[j], g)

    def compose(self, other: "GMap") -> "GMap":
        """self o other."""
        if other.target != self.source:
            raise SiteMismatchError("Composable G-maps must share the middle G-set")
        return GMap.from_point_map(other.source, self.target, self.point_map[other.point_map])

    def to_dict(self) -> dict[str, Any]:
        labels = self.source.group.labels
        return {
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "assignment": [
                {"target_orbit": j, "element": g, "label": labels[g]} for j, g in self.assignment
            ],
        }


def all_gmaps(s: GSet, t: GSet) -> list[GMap]:
    """Every G-map S -> T, orbit by orbit over the H-fixed points of T."""
    if s.group is not t.group:
        raise SiteMismatchError("G-maps between G-sets over different groups")
    span = np.arange(t.n_points)
    choices = []
    for i in range(len(s.instances)):
        h = np.array(s.rep(i).elements, dtype=np.int64)
        fixed = np.flatnonzero(np.all(t.action[h] == span[None, :], axis=0))
        options = []
        for point in fixed.tolist():
            j, c = t.locate(point)
            options.append((j, int(t.cosets(j).reps[c])))
        choices.append(options)
    return [GMap(s, t, tuple(combo)) for combo in itertools.product(*choices)]


@dataclass(frozen=True, eq=False)
class Pullback:
    """S x_T U decomposed into canonical orbits, with both projections."""

    gset: GSet
    left: GMap
    right: GMap
    pair_codes: np.ndarray = field(repr=False)
    pair_points: np.ndarray = field(repr=False)
    width: int = 0

    def __iter__(self) -> Iterator[Any]:
        return iter((self.gset, self.left, self.right))

    def index(self, s: int, u: int) -> int:
        """Point of the pullback over the pair (s, u)."""
        code = s * self.width + u
        k = int(np.searchsorted(self.pair_codes, code))
        if k >= len(self.pair_codes) or self.pair_codes[k] != code:
            raise SiteMismatchError(f"({s}, {u}) is not a point of the pullback")
        return int(self.pair_points[k])

    def indices(self, s: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Vectorised `index` over arrays of pairs."""
        codes = np.asarray(s, dtype=np.int64) * self.width + np.asarray(u, dtype=np.int64)
        k = np.searchsorted(self.pair_codes, codes)
        clipped = np.minimum(k, len(self.pair_codes) - 1)
        if np.any(k >= len(self.pair_codes)) or np.any(self.pair_codes[clipped] != codes):
            raise SiteMismatchError("Some pairs are not points of the pullback")
        return self.pair_points[k]


def pullback(f: GMap, g: GMap) -> Pullback:
    """Fibre product of f: S -> T and g: U -> T by direct point enumeration."""
    if f.target != g.target:
        raise SiteMismatchError("Pullback needs maps with a common target")
    s, u = f.source, g.source
    group = s.group
    ss, uu = np.nonzero(f.point_map[:, None] == g.point_map[None, :])
    n = len(ss)
    if n > group.limits.max_points:
        raise CapExceededError("pullback point count", n, group.limits.max_points)
    width = max(u.n_points, 1)
    codes = ss.astype(np.int64) * width + uu
    moved = s.action[:, ss] * width + u.action[:, uu]
    action = np.searchsorted(codes, moved)
    decomposition = GSet.from_action(group, action)
    p = decomposition.gset
    left_pm = np.zeros(p.n_points, dtype=np.int64)
    right_pm = np.zeros(p.n_points, dtype=np.int64)
    left_pm[decomposition.embedding] = ss
    right_pm[decomposition.embedding] = uu
    return Pullback(
        gset=p,
        left=GMap.from_point_map(p, s, left_pm),
        right=GMap.from_point_map(p, u, right_pm),
        pair_codes=codes,
        pair_points=decomposition.embedding,
        width=width,
    )


def product(s: GSet, t: GSet) -> Pullback:
    """S x T as the pullback over the one-point G-set."""
    return pullback(GMap.to_point(s), GMap.to_point(t))


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    """A set of subgroup classes closed under taking subgroups."""

    group: Group = field(repr=False, compare=False)
    members: frozenset[int]

    def __post_init__(self) -> None:
        sub = self.group.lattice.subconjugacy
        for c in self.members:
            missing = [d for d in range(len(sub)) if sub[d, c] and d not in self.members]
            if missing:
                labels = self.group.lattice.classes
                raise FamilyError(
                    f"Family contains {labels[c].label} but not its subgroup class "
                    f"{labels[missing[0]].label}"
                )

    @classmethod
    def generated_by(cls, group: Group, classes: Iterable[int]) -> "Family":
        sub = group.lattice.subconjugacy
        seeds = set(classes)
        members = {d for c in seeds for d in range(len(sub)) if sub[d, c]}
        return cls(group, frozenset(members))

    @classmethod
    def where(cls, group: Group, predicate: Any) -> "Family":
        lattice = group.lattice
        return cls(group, frozenset(c.index for c in lattice.classes if predicate(c.representative)))

    def __contains__(self, sub: object) -> bool:
        if isinstance(sub, Subgroup):
            return self.group.lattice.class_of[sub.elements] in self.members
        return sub in self.members

    @property
    def maximal_classes(self) -> list[int]:
        sub = self.group.lattice.subconjugacy
        return sorted(
            c for c in self.members if not any(d != c and sub[c, d] for d in self.members)
        )

    def to_dict(self) -> dict[str, Any]:
        classes = self.group.lattice.classes
        return {
            "members": [classes[c].label for c in sorted(self.members)],
            "maximal": [classes[c].label for c in self.maximal_classes],
        }


def all_family(group: Group) -> Family:
    return Family(group, frozenset(range(len(group.lattice))))


def trivial_family(group: Group) -> Family:
    return Family(group, frozenset({0}))


def cyclic_family(group: Group) -> Family:
    return Family.where(group, Subgroup.is_cyclic)


def p_elementary_family(group: Group, p: int) -> Family:
    return Family.where(group, lambda h: is_p_elementary(h, p))


def p_hyperelementary_family(group: Group, p: int) -> Family:
    return Family.where(group, lambda h: is_p_hyperelementary(h, p))


def hyperelementary_family(group: Group) -> Family:
    return Family.where(group, is_hyperelementary)


def gset_of_family(f: Family) -> GSet:
    """One orbit G/H per maximal class H of the family."""
    return GSet(f.group, f.maximal_classes)


def family_of(s: GSet) -> Family:
    """Subgroup closure of the isotropy classes of S."""
    return Family.generated_by(s.group, s.instances)


def hyper_p_closure(f: Family, p: int) -> Family:
    """All H whose O^p(H) lies in the family."""
    if not isprime(p):
        raise FamilyError(f"{p} is not prime")
    lattice = f.group.lattice
    return Family(
        f.group,
        frozenset(c.index for c in lattice.classes
                  if lattice.class_of[o_p(c.representative, p).elements] in f.members),
    )


def hyper_p_set(x: GSet, p: int) -> GSet:
    return gset_of_family(hyper_p_closure(family_of(x), p))


def group_primes(group: Group) -> list[int]:
    return [int(q) for q in primefactors(group.order)]


# ---------------------------------------------------------------------------
# text formats for groups, G-sets, families and maps
# ---------------------------------------------------------------------------


def _prime_argument(keyword: str, spec: str) -> int:
    try:
        p = int(spec.split(":", 1)[1])
    except (IndexError, ValueError) as e:
        raise GroupSpecError(f"'{keyword}' needs a prime, as in '{keyword}:2'") from e
    if not isprime(p):
        raise GroupSpecError(f"'{spec}': {p} is not prime")
    return p


def parse_family_spec(group: Group, spec: str) -> Family:
    """'all', 'trivial', 'cyclic', 'elementary:p', 'p-hyperelementary:p',
    'hyperelementary', or a comma list of class labels (closed under subgroups)."""
    text = spec.strip()
    if text == "all":
        return all_family(group)
    if text == "trivial":
        return trivial_family(group)
    if text == "cyclic":
        return cyclic_family(group)
    if text == "hyperelementary":
        return hyperelementary_family(group)
    if text.startswith("elementary:"):
        return p_elementary_family(group, _prime_argument("elementary", text))
    if text.startswith(("p-hyperelementary:", "hyperelementary:")):
        return p_hyperelementary_family(group, _prime_argument("p-hyperelementary", text))
    lattice = group.lattice
    return Family.generated_by(group, [lattice.class_by_name(x) for x in text.split(",") if x.strip()])


def parse_gset_spec(group: Group, spec: str) -> GSet:
    """'point', 'free', 'empty', a family keyword, or 'Label:mult,...'."""
    text = spec.strip()
    if text in ("point", "all"):
        return GSet.point(group)
    if text == "free":
        return GSet.free(group)
    if text == "empty":
        return GSet(group)
    if text in ("cyclic", "hyperelementary") or text.startswith(
        ("elementary:", "p-hyperelementary:", "hyperelementary:")
    ):
        return gset_of_family(parse_family_spec(group, text))
    lattice = group.lattice
    instances: list[int] = []
    for item in text.split(","):
        if not item.strip():
            continue
        name, _, mult = item.partition(":")
        try:
            count = int(mult) if mult else 1
        except ValueError as e:
            raise GroupSpecError(f"Bad multiplicity in '{item}'") from e
        if count < 1:
            raise GroupSpecError(f"Multiplicity must be positive in '{item}'")
        instances.extend([lattice.class_by_name(name)] * count)
    return GSet(group, instances)


def parse_gmap_spec(group: Group, spec: str) -> GMap:
    """'Source->Target@g' for the transitive map eH -> gK (g an element index or label)."""
    text = spec.strip()
    try:
        arrow, _, element = text.partition("@")
        source, target = (x.strip() for x in arrow.split("->"))
    except ValueError as e:
        raise GroupSpecError(f"Malformed map spec '{spec}', expected 'H->K@g'") from e
    lattice = group.lattice
    h, k = lattice.class_by_name(source), lattice.class_by_name(target)
    element = element.strip() or "0"
    if element.isdigit():
        g = int(element)
    elif element in group.labels:
        g = group.labels.index(element)
    else:
        raise GroupSpecError(f"Unknown element '{element}' in map spec '{spec}'")
    if not 0 <= g < group.order:
        raise GroupSpecError(f"Element {g} out of range in map spec '{spec}'")
    g = canonical_representative(g, lattice.rep(k))
    return GMap(GSet.transitive(group, h), GSet.transitive(group, k), ((0, g),))


def union_of(gsets: Sequence[GSet]) -> GSet:
    group = gsets[0].group
    return GSet(group, [c for s in gsets for c in s.instances])
