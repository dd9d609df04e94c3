"""Finite groups as explicit multiplication tables and their subgroup lattices."""

import logging
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
from sympy import isprime, primefactors
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import (
    AbelianGroup,
    AlternatingGroup,
    CyclicGroup,
    DihedralGroup,
    SymmetricGroup,
)

from .config import Limits
from .exceptions import CapExceededError, GroupAxiomError, GroupSpecError, HomomorphismError

logger = logging.getLogger(__name__)

QUATERNION_GENERATORS = "(1 3 2 4)(5 7 6 8); (1 5 2 6)(3 8 4 7)"

_CATALOG_HELP = (
    "Cn (cyclic), Dn (dihedral of order 2n), Q8, Sn / An (n <= 5), "
    "E_p^k (elementary abelian), or permutation generators in cycle notation "
    "separated by ';'"
)


class Group:
    """A finite group given by its multiplication table.

    Element 0 must be the identity. The table is validated on construction:
    Latin-square rows and columns, identity, and associativity.
    """

    def __init__(
        self,
        table: Any,
        labels: Sequence[str] | None = None,
        name: str = "",
        limits: Limits | None = None,
        permutations: Sequence[Sequence[int]] | None = None,
    ):
        self.limits = limits or Limits()
        mult = np.asarray(table, dtype=np.int64)
        if mult.ndim != 2 or mult.shape[0] != mult.shape[1] or mult.shape[0] == 0:
            raise GroupAxiomError(f"Multiplication table must be square and non-empty, got {mult.shape}")
        n = mult.shape[0]
        if n > self.limits.max_group_order:
            raise CapExceededError("group order", n, self.limits.max_group_order)
        if mult.min() < 0 or mult.max() >= n:
            raise GroupAxiomError("Multiplication table has entries outside the element range")
        span = np.arange(n)
        if not (np.array_equal(mult[0], span) and np.array_equal(mult[:, 0], span)):
            raise GroupAxiomError("Element 0 is not a two-sided identity")
        for axis in (0, 1):
            if not (np.sort(mult, axis=axis) == span.reshape((-1, 1) if axis == 0 else (1, -1))).all():
                raise GroupAxiomError("Multiplication table is not a Latin square")
        for a in range(n):
            if not np.array_equal(mult[mult[a]], mult[a][mult]):
                raise GroupAxiomError(f"Multiplication is not associative (first failure at element {a})")

        self.order = n
        self.table = mult
        self.identity = 0
        self.inverse = np.argmin(mult, axis=1)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        if len(self.labels) != n:
            raise GroupAxiomError(f"{len(self.labels)} labels for {n} elements")
        self.name = name or f"group of order {n}"
        self.permutations = tuple(tuple(p) for p in permutations) if permutations else None
        self._rows: list[list[int]] = mult.tolist()
        self._inv: list[int] = self.inverse.tolist()

    def __repr__(self) -> str:
        return f"Group({self.name!r}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self._rows[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self._rows[self._rows[g][x]][self._inv[g]]

    def conjugate_set(self, elements: Iterable[int], g: int) -> tuple[int, ...]:
        return tuple(sorted(self.conj(g, x) for x in elements))

    def generate(self, generators: Iterable[int]) -> tuple[int, ...]:
        """Sorted element set of the subgroup generated by `generators`."""
        gens = [g for g in dict.fromkeys(generators) if g != 0]
        elements = [0]
        seen = {0}
        rows = self._rows
        for x in elements:
            row = rows[x]
            for g in gens:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    elements.append(y)
        return tuple(sorted(elements))

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        orders = []
        for x in range(self.order):
            k, y = 1, x
            while y != 0:
                y = self._rows[y][x]
                k += 1
            orders.append(k)
        return tuple(orders)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        """Validated subgroup from an element set."""
        elems = tuple(sorted(set(elements)))
        if self.generate(elems) != elems:
            raise GroupAxiomError(f"Elements {elems} do not form a subgroup")
        return Subgroup(self, elems)

    @cached_property
    def lattice(self) -> "SubgroupLattice":
        return SubgroupLattice(self)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "order": self.order,
            "identity": self.identity,
            "labels": list(self.labels),
            "table": self.table.tolist(),
        }


def _cycle_label(perm: Sequence[int]) -> str:
    seen: set[int] = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cycle.append(x)
            seen.add(x)
            x = perm[x]
        cycles.append("(" + " ".join(str(c + 1) for c in cycle) + ")")
    return "".join(cycles) or "()"


def _parse_generators(spec: str) -> PermutationGroup:
    gens = []
    for chunk in spec.split(";"):
        text = re.sub(r"\)\s+\(", ")(", chunk.strip())
        if not re.fullmatch(r"(\(\s*(\d+\s*)*\))+", text):
            raise GroupSpecError(f"Malformed permutation '{text}' (expected cycle notation like (1 2)(3 4))")
        cycles = [[int(x) - 1 for x in c.split()] for c in re.findall(r"\(([^)]*)\)", text)]
        cycles = [c for c in cycles if c]
        for c in cycles:
            if min(c, default=0) < 0 or len(set(c)) != len(c):
                raise GroupSpecError(f"Malformed cycle in '{text}' (points are 1-based and distinct)")
        gens.append(cycles)
    degree = max((x for cycles in gens for c in cycles for x in c), default=0) + 1
    perms = [Permutation(cycles, size=degree) if cycles else Permutation(list(range(degree)))
             for cycles in gens]
    return PermutationGroup(perms)


def _catalog_group(spec: str) -> PermutationGroup | None:
    if spec == "Q8":
        return _parse_generators(QUATERNION_GENERATORS)
    if match := re.fullmatch(r"C(\d+)", spec):
        n = int(match.group(1))
        return CyclicGroup(n) if n >= 1 else None
    if match := re.fullmatch(r"D(\d+)", spec):
        n = int(match.group(1))
        return DihedralGroup(n) if n >= 1 else None
    if match := re.fullmatch(r"([SA])(\d+)", spec):
        kind, n = match.group(1), int(match.group(2))
        if not 1 <= n <= 5:
            raise GroupSpecError(f"{kind}n is only catalogued for n <= 5, got '{spec}'")
        if kind == "S":
            return SymmetricGroup(n)
        return AlternatingGroup(n) if n >= 3 else CyclicGroup(1)
    if match := re.fullmatch(r"E_?(\d+)\^(\d+)", spec):
        p, k = int(match.group(1)), int(match.group(2))
        if not isprime(p) or k < 1:
            raise GroupSpecError(f"E_p^k needs a prime p and k >= 1, got '{spec}'")
        return AbelianGroup(*([p] * k))
    return None


def group_from_spec(spec: str, limits: Limits | None = None) -> Group:
    """Build a validated Group from a catalog name or permutation generators.

    Elements are the permutations of the generated group sorted by image
    list, so the identity is element 0 and the numbering is deterministic.
    Products compose right to left: (a*b)(x) = a(b(x)).
    """
    limits = limits or Limits()
    text = spec.strip()
    pg = _catalog_group(text)
    if pg is None:
        if "(" not in text:
            raise GroupSpecError(f"Unknown group spec '{spec}'; expected {_CATALOG_HELP}")
        pg = _parse_generators(text)
    order = int(pg.order())
    if order > limits.max_group_order:
        raise CapExceededError(f"group '{text}'", order, limits.max_group_order)

    perms = sorted(tuple(p.array_form) for p in pg.generate())
    index = {p: i for i, p in enumerate(perms)}
    arr = np.array(perms, dtype=np.int64)
    table = np.zeros((order, order), dtype=np.int64)
    for a in range(order):
        composed = arr[a][arr]
        table[a] = [index[tuple(row)] for row in composed.tolist()]
    logger.debug(f"Built {text} with {order} elements of degree {arr.shape[1]}")
    return Group(table, labels=[_cycle_label(p) for p in perms], name=text, limits=limits,
                 permutations=perms)


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as a sorted tuple of element indices of its parent group."""

    group: Group = field(repr=False)
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.element_set

    def issubset(self, other: "Subgroup") -> bool:
        return self.element_set <= other.element_set

    def conjugate(self, g: int) -> "Subgroup":
        """g K g^-1."""
        return Subgroup(self.group, self.group.conjugate_set(self.elements, g))

    def is_normal_in(self, h: "Subgroup") -> bool:
        return self.issubset(h) and all(self.conjugate(g) == self for g in h.elements)

    def is_cyclic(self) -> bool:
        orders = self.group.element_orders
        return any(orders[x] == self.order for x in self.elements)

    def is_abelian(self) -> bool:
        g = self.group
        return all(g.mul(a, b) == g.mul(b, a) for a in self.elements for b in self.elements)

    def labels(self) -> list[str]:
        return [self.group.labels[x] for x in self.elements]

    def to_dict(self) -> dict[str, Any]:
        return {"order": self.order, "elements": list(self.elements)}


@dataclass(frozen=True)
class SubgroupClass:
    """Conjugacy class of subgroups with its canonical representative."""

    index: int
    representative: Subgroup
    normalizer_order: int
    label: str = ""

    @property
    def order(self) -> int:
        return self.representative.order

    @property
    def size(self) -> int:
        return self.representative.group.order // self.normalizer_order

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "label": self.label,
            "order": self.order,
            "representative": list(self.representative.elements),
            "normalizer_order": self.normalizer_order,
            "conjugates": self.size,
        }


@dataclass(frozen=True)
class LocalClasses:
    """Subgroups of H up to H-conjugacy: the transitive H-sets H/K."""

    ambient: Subgroup
    representatives: tuple[Subgroup, ...]
    index_of: dict[tuple[int, ...], int] = field(repr=False)
    conjugator: dict[tuple[int, ...], int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.representatives)

    def locate(self, elements: tuple[int, ...]) -> tuple[int, int]:
        """(local index, h in H) with h K h^-1 equal to the representative."""
        return self.index_of[elements], self.conjugator[elements]


def _label_classes(classes: list[SubgroupClass], group: Group) -> list[SubgroupClass]:
    names = []
    for c in classes:
        rep = c.representative
        n = rep.order
        if rep.is_cyclic():
            names.append(f"C{n}")
            continue
        exponents = {group.element_orders[x] for x in rep.elements} - {1}
        if len(exponents) == 1 and rep.is_abelian():
            p = exponents.pop()
            k = round(np.log(n) / np.log(p))
            if isprime(p) and p ** k == n:
                names.append(f"E{p}^{k}")
                continue
        names.append("G" if n == group.order else f"H{n}")
    counts: dict[str, int] = {}
    for name in names:
        counts[name] = counts.get(name, 0) + 1
    seen: dict[str, int] = {}
    labelled = []
    for c, name in zip(classes, names, strict=True):
        if counts[name] > 1:
            seen[name] = seen.get(name, 0) + 1
            name = f"{name}.{seen[name]}"
        labelled.append(SubgroupClass(c.index, c.representative, c.normalizer_order, name))
    return labelled


class SubgroupLattice:
    """All subgroups of a group, grouped into canonical conjugacy classes."""

    def __init__(self, group: Group):
        self.group = group
        self.subgroups = self._enumerate()
        self._classify()
        self._local: dict[tuple[int, ...], LocalClasses] = {}
        logger.info(
            f"{group.name}: {len(self.subgroups)} subgroups in {len(self.classes)} conjugacy classes"
        )

    def _enumerate(self) -> list[Subgroup]:
        g = self.group
        cap = g.limits.max_subgroups
        gens: dict[tuple[int, ...], list[int]] = {(0,): []}
        layer = [(0,)]
        while layer:
            next_layer = []
            for elems in layer:
                members = set(elems)
                covered: set[int] = set(members)
                for x in range(g.order):
                    if x in covered:
                        continue
                    covered.update(g.mul(x, h) for h in elems)
                    new_gens = gens[elems] + [x]
                    k = g.generate(new_gens)
                    if k not in gens:
                        gens[k] = new_gens
                        next_layer.append(k)
                        if len(gens) > cap:
                            raise CapExceededError(f"subgroup count of {g.name}", len(gens), cap)
            layer = next_layer
        return [Subgroup(g, k) for k in sorted(gens, key=lambda k: (len(k), k))]

    def _classify(self) -> None:
        g = self.group
        table, inverse = g.table, g.inverse
        self.class_of: dict[tuple[int, ...], int] = {}
        self.to_rep: dict[tuple[int, ...], int] = {}
        raw: list[SubgroupClass] = []
        self.members: list[list[Subgroup]] = []
        for sub in self.subgroups:
            if sub.elements in self.class_of:
                continue
            arr = np.array(sub.elements, dtype=np.int64)
            conj = np.sort(table[table[:, arr], inverse[:, None]], axis=1)
            conjugates = [tuple(row) for row in conj.tolist()]
            rep = min(conjugates)
            g0 = conjugates.index(rep)
            index = len(raw)
            found: dict[tuple[int, ...], int] = {}
            for g1, k in enumerate(conjugates):
                if k not in found:
                    found[k] = g1
            for k, g1 in found.items():
                self.class_of[k] = index
                # c = g0 g1^-1 carries g1 K g1^-1 onto g0 K g0^-1
                self.to_rep[k] = g.mul(g0, g.inv(g1))
            normalizer = sum(1 for k in conjugates if k == sub.elements)
            raw.append(SubgroupClass(index, Subgroup(g, rep), normalizer))
            self.members.append([Subgroup(g, k) for k in sorted(found)])
        self.classes = _label_classes(raw, g)
        self._by_label = {c.label: c.index for c in self.classes}

    def __len__(self) -> int:
        return len(self.classes)

    def rep(self, index: int) -> Subgroup:
        return self.classes[index].representative

    def locate(self, sub: Subgroup | tuple[int, ...]) -> tuple[int, int]:
        """(class index, c) with c K c^-1 the class representative."""
        key = sub.elements if isinstance(sub, Subgroup) else sub
        return self.class_of[key], self.to_rep[key]

    def class_by_name(self, name: str) -> int:
        """Resolve a class label ('C2', 'E2^2.1', 'G'), '#index', or 'e'/'1'."""
        text = name.strip()
        if text in ("e", "1", "trivial"):
            return 0
        if text.startswith("#") and text[1:].isdigit():
            index = int(text[1:])
            if index < len(self.classes):
                return index
        if text in self._by_label:
            return self._by_label[text]
        known = ", ".join(c.label for c in self.classes)
        raise GroupSpecError(f"Unknown subgroup class '{name}' for {self.group.name} (known: {known})")

    def normal_subgroups(self) -> list[Subgroup]:
        return [c.representative for c in self.classes if c.size == 1]

    def subgroups_of(self, h: Subgroup) -> list[Subgroup]:
        return [k for k in self.subgroups if k.order <= h.order and k.issubset(h)]

    def local_classes(self, h: Subgroup) -> LocalClasses:
        """Subgroups of h up to h-conjugacy, ordered by (order, canonical elements)."""
        cached = self._local.get(h.elements)
        if cached is not None:
            return cached
        g = self.group
        index_of: dict[tuple[int, ...], int] = {}
        conjugator: dict[tuple[int, ...], int] = {}
        reps: list[tuple[int, ...]] = []
        for k in self.subgroups_of(h):
            if k.elements in conjugator:
                continue
            conjugates = [(g.conjugate_set(k.elements, x), x) for x in h.elements]
            rep, x0 = min(conjugates)
            for kk, x1 in conjugates:
                if kk not in conjugator:
                    conjugator[kk] = g.mul(x0, g.inv(x1))
            reps.append(rep)
        reps.sort(key=lambda k: (len(k), k))
        position = {k: i for i, k in enumerate(reps)}
        for kk, x in conjugator.items():
            index_of[kk] = position[g.conjugate_set(kk, x)]
        result = LocalClasses(h, tuple(Subgroup(g, k) for k in reps), index_of, conjugator)
        self._local[h.elements] = result
        return result

    @cached_property
    def subconjugacy(self) -> np.ndarray:
        """Boolean matrix: [c, d] true iff a conjugate of class c lies in class d's rep."""
        n = len(self.classes)
        out = np.zeros((n, n), dtype=bool)
        for d in range(n):
            rep_d = self.rep(d)
            for c in range(n):
                if self.classes[c].order <= rep_d.order:
                    out[c, d] = any(k.issubset(rep_d) for k in self.members[c])
        return out

    def marks(self, k: Subgroup, h: Subgroup) -> int:
        """|(G/K)^H| = #{g : g^-1 H g <= K} / |K|."""
        g = self.group
        inside = k.element_set
        count = sum(
            1 for x in range(g.order)
            if all(g.conj(g.inv(x), y) in inside for y in h.elements)
        )
        return count // k.order

    def to_list(self) -> list[dict[str, Any]]:
        return [c.to_dict() for c in self.classes]


def subgroup_classes(g: Group) -> list[SubgroupClass]:
    return list(g.lattice.classes)


# ---------------------------------------------------------------------------
# O^p and (hyper)elementary subgroups
# ---------------------------------------------------------------------------


def o_p(h: Subgroup, p: int) -> Subgroup:
    """Smallest normal subgroup of h with p-group quotient.

    It is generated by the elements of h whose order is prime to p.
    """
    if not isprime(p):
        raise GroupSpecError(f"{p} is not prime")
    g = h.group
    orders = g.element_orders
    return Subgroup(g, g.generate(x for x in h.elements if orders[x] % p != 0))


def _p_part(n: int, p: int) -> int:
    part = 1
    while n % p == 0:
        n //= p
        part *= p
    return part


def is_p_hyperelementary(h: Subgroup, p: int) -> bool:
    c = o_p(h, p)
    return c.order % p != 0 and c.is_cyclic()


def is_hyperelementary(h: Subgroup) -> bool:
    if h.order == 1:
        return True
    return any(is_p_hyperelementary(h, q) for q in primefactors(h.order))


def is_p_elementary(h: Subgroup, p: int) -> bool:
    """C x P with C cyclic of order prime to p: hyperelementary with a normal Sylow p."""
    if not is_p_hyperelementary(h, p):
        return False
    orders = h.group.element_orders
    p_elements = [x for x in h.elements if _p_part(orders[x], p) == orders[x]]
    return len(p_elements) == _p_part(h.order, p)


# ---------------------------------------------------------------------------
# orientations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Orientation:
    """A homomorphism w: G -> {+1, -1}, stored as one sign per element."""

    group: Group = field(repr=False)
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        g = self.group
        if len(self.signs) != g.order or any(s not in (1, -1) for s in self.signs):
            raise HomomorphismError("Orientation needs one sign (+1 or -1) per element")
        for a in range(g.order):
            for b in range(g.order):
                if self.signs[g.mul(a, b)] != self.signs[a] * self.signs[b]:
                    raise HomomorphismError(
                        f"Orientation is not a homomorphism at ({g.labels[a]}, {g.labels[b]})"
                    )

    def __call__(self, x: int) -> int:
        return self.signs[x]

    @property
    def is_trivial(self) -> bool:
        return all(s == 1 for s in self.signs)

    @property
    def kernel(self) -> Subgroup:
        return Subgroup(self.group, tuple(x for x, s in enumerate(self.signs) if s == 1))

    @classmethod
    def trivial(cls, group: Group) -> "Orientation":
        return cls(group, (1,) * group.order)

    @classmethod
    def from_kernel(cls, group: Group, kernel: Subgroup) -> "Orientation":
        if group.order % kernel.order != 0 or group.order // kernel.order > 2:
            raise HomomorphismError(f"Kernel of order {kernel.order} does not have index 1 or 2")
        if not kernel.is_normal_in(group.whole):
            raise HomomorphismError("Orientation kernel must be normal")
        return cls(group, tuple(1 if x in kernel else -1 for x in range(group.order)))

    @classmethod
    def sign(cls, group: Group) -> "Orientation":
        """The permutation sign, for groups built from permutations."""
        if group.permutations is None:
            raise HomomorphismError(f"{group.name} carries no permutation data for a sign character")
        return cls(group, tuple(Permutation(list(p)).signature() for p in group.permutations))

    def to_dict(self) -> dict[str, Any]:
        return {"kernel": list(self.kernel.elements), "signs": list(self.signs)}


def orientation_from_spec(group: Group, spec: str) -> Orientation:
    """'1' (trivial), 'sign', 'trivial-kernel', or the class label of the kernel."""
    text = spec.strip()
    if text in ("1", "none", "trivial"):
        return Orientation.trivial(group)
    if text == "sign":
        return Orientation.sign(group)
    if text == "trivial-kernel":
        return Orientation.from_kernel(group, group.trivial)
    index = group.lattice.class_by_name(text)
    return Orientation.from_kernel(group, group.lattice.rep(index))
