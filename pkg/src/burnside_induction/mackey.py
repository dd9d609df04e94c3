"""Tabulated Mackey functors, Green rings and their homomorphisms.

A functor is stored by its value at each subgroup class (a finitely
presented abelian group) and by one induction and one restriction matrix per
canonical transitive G-map. Values at arbitrary G-sets and maps between them
are assembled orbit by orbit. Pre-functors may also carry `inner`
matrices: the action of an element x of the class representative H on
M(G/H), which a genuine Mackey functor must make trivial.
"""

import logging
from collections import defaultdict
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Literal

import numpy as np

from .burnside import action_matrix, burnside_ring, local_table_of_marks
from .exceptions import ConfigError, NonNaturalError, ShapeMismatchError, SiteMismatchError
from .groups import Group, Orientation
from .gsets import (
    GMap,
    GSet,
    Pullback,
    TransitiveMap,
    compose_transitive,
    coproduct,
    pullback,
    transitive_maps,
)
from .zlocal import (
    CokernelInvariants,
    IntMatrix,
    SmithForm,
    apply,
    as_int_matrix,
    block_diagonal,
    coordinates,
    hermite_basis,
    hstack,
    identity,
    is_zero,
    kernel,
    lattice_sum,
    mat_mul,
    snf,
    to_lists,
    zeros,
)

logger = logging.getLogger(__name__)

Direction = Literal["covariant", "contravariant"]
COVARIANT: Direction = "covariant"
CONTRAVARIANT: Direction = "contravariant"


class AbGroupPresentation:
    """Z^n modulo the span of the relation columns."""

    def __init__(self, n_generators: int, relations: IntMatrix | None = None):
        self.n_generators = n_generators
        if relations is None or relations.shape[1] == 0:
            self.relations = zeros(n_generators, 0)
        else:
            if relations.shape[0] != n_generators:
                raise ShapeMismatchError(
                    f"Relations have {relations.shape[0]} rows for {n_generators} generators"
                )
            self.relations = hermite_basis(relations)

    @classmethod
    def free(cls, n: int) -> "AbGroupPresentation":
        return cls(n)

    @classmethod
    def direct_sum(cls, parts: Sequence["AbGroupPresentation"]) -> "AbGroupPresentation":
        n = sum(p.n_generators for p in parts)
        if all(p.relations.shape[1] == 0 for p in parts):
            return cls(n)
        return cls(n, block_diagonal([p.relations for p in parts]))

    def __repr__(self) -> str:
        return f"AbGroupPresentation({self.invariants.describe()})"

    @cached_property
    def _smith(self) -> SmithForm:
        return snf(self.relations)

    @cached_property
    def invariants(self) -> CokernelInvariants:
        form = self._smith
        return CokernelInvariants(
            free_rank=self.n_generators - form.rank,
            torsion=tuple(d for d in form.divisors if d > 1),
        )

    @property
    def is_free(self) -> bool:
        return self.relations.shape[1] == 0

    @cached_property
    def reduction(self) -> tuple[IntMatrix, tuple[int, ...]]:
        """(U, moduli): x is zero in the quotient iff (U x)_i = 0 mod moduli[i] (0: exactly)."""
        n = self.n_generators
        if self.is_free:
            return identity(n), (0,) * n
        form = self._smith
        return form.U, tuple(int(form.D[i, i]) if i < form.rank else 0 for i in range(n))

    def vanishes(self, m: np.ndarray) -> bool:
        """Every column of m is zero in the quotient."""
        if self.n_generators == 0 or m.shape[1] == 0:
            return True
        if self.is_free:
            return is_zero(m)
        u, moduli = self.reduction
        reduced = mat_mul(u, m)
        return all(is_zero(reduced[i], d) for i, d in enumerate(moduli))

    def maps_equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        if a.shape != b.shape:
            raise ShapeMismatchError(f"Comparing maps of shapes {a.shape} and {b.shape}")
        return self.vanishes(a - b)

    def to_dict(self) -> dict[str, Any]:
        return {
            "generators": self.n_generators,
            "relations": to_lists(self.relations.T),
            "invariants": self.invariants.to_dict(),
        }


@dataclass(frozen=True)
class Defect:
    """One failed identity, with the data needed to reproduce it."""

    kind: str
    detail: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, **self.detail}


@dataclass
class ValidationReport:
    """Counts of checked identities and the list of failures."""

    subject: str
    group: str
    checked: dict[str, int] = field(default_factory=lambda: defaultdict(int))
    defects: list[Defect] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.defects

    def check(self, kind: str, holds: bool, detail: Callable[[], dict[str, Any]]) -> bool:
        self.checked[kind] += 1
        if not holds:
            self.defects.append(Defect(kind, detail()))
        return holds

    def defect_kinds(self) -> set[str]:
        return {d.kind for d in self.defects}

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "group": self.group,
            "ok": self.ok,
            "checked": dict(sorted(self.checked.items())),
            "defects": [d.to_dict() for d in self.defects],
        }


def _map_dict(group: Group, tm: TransitiveMap) -> dict[str, Any]:
    classes = group.lattice.classes
    return {
        "source": classes[tm.source].label,
        "target": classes[tm.target].label,
        "element": tm.element,
        "element_label": group.labels[tm.element],
    }


@dataclass(frozen=True, eq=False)
class MackeyData:
    """A (pre-)Mackey functor tabulated on transitive G-sets."""

    group: Group
    values: tuple[AbGroupPresentation, ...]
    ind: dict[TransitiveMap, IntMatrix]
    res: dict[TransitiveMap, IntMatrix]
    inner: dict[tuple[int, int], IntMatrix] = field(default_factory=dict)
    name: str = ""
    pre_only: bool = False
    _cache: dict[Any, Any] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        n = [v.n_generators for v in self.values]
        if len(n) != len(self.group.lattice):
            raise ShapeMismatchError(f"{len(n)} values for {len(self.group.lattice)} subgroup classes")
        for tm in transitive_maps(self.group):
            if tm not in self.ind or tm not in self.res:
                raise ShapeMismatchError(f"Missing structure map for {_map_dict(self.group, tm)}")
            if self.ind[tm].shape != (n[tm.target], n[tm.source]):
                raise ShapeMismatchError(f"Induction along {tm} has shape {self.ind[tm].shape}")
            if self.res[tm].shape != (n[tm.source], n[tm.target]):
                raise ShapeMismatchError(f"Restriction along {tm} has shape {self.res[tm].shape}")
        for (h, x), matrix in self.inner.items():
            if x not in self.group.lattice.rep(h):
                raise ShapeMismatchError(f"Inner element {x} does not lie in class {h}")
            if matrix.shape != (n[h], n[h]):
                raise ShapeMismatchError(f"Inner matrix at class {h} has shape {matrix.shape}")

    def __repr__(self) -> str:
        return f"MackeyData({self.name!r}, {self.group.name})"

    def inner_matrix(self, h: int, x: int) -> IntMatrix:
        return self.inner.get((h, x), identity(self.values[h].n_generators))

    def offsets(self, s: GSet) -> list[int]:
        sizes = [self.values[c].n_generators for c in s.instances]
        return [int(x) for x in np.cumsum([0, *sizes])]

    def evaluate(self, s: GSet) -> AbGroupPresentation:
        """M(S) as the direct sum of the values on its orbits; M(empty) = 0."""
        if s.group is not self.group:
            raise SiteMismatchError("Evaluating at a G-set over a different group")
        key = ("value", s)
        if key not in self._cache:
            self._cache[key] = AbGroupPresentation.direct_sum([self.values[c] for c in s.instances])
        return self._cache[key]

    def covariant(self, f: GMap) -> IntMatrix:
        return self.map(f, COVARIANT)

    def contravariant(self, f: GMap) -> IntMatrix:
        return self.map(f, CONTRAVARIANT)

    def map(self, f: GMap, direction: Direction = COVARIANT) -> IntMatrix:
        """Block matrix of f_* (M(S) -> M(T)) or f^* (M(T) -> M(S))."""
        if f.source.group is not self.group:
            raise SiteMismatchError("Map over a different group")
        key = (direction, f)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        src, tgt = self.offsets(f.source), self.offsets(f.target)
        if direction == COVARIANT:
            out = zeros(tgt[-1], src[-1])
            for i, j, tm in f.components():
                out[tgt[j]:tgt[j + 1], src[i]:src[i + 1]] = self.ind[tm]
        elif direction == CONTRAVARIANT:
            out = zeros(src[-1], tgt[-1])
            for i, j, tm in f.components():
                out[src[i]:src[i + 1], tgt[j]:tgt[j + 1]] = self.res[tm]
        else:
            raise ValueError(f"Unknown direction '{direction}'")
        self._cache[key] = out
        return out

    @cached_property
    def report(self) -> ValidationReport:
        return validate_mackey(self)

    @property
    def is_mackey(self) -> bool:
        return self.report.ok

    def sub(self, lattices: Sequence[IntMatrix], name: str = "") -> "MackeyData":
        """Subfunctor on the given lattices (each containing the relations), in their bases."""
        bases = [hermite_basis(b) for b in lattices]

        def restrict_to(target: int, matrix: IntMatrix, source: int) -> IntMatrix:
            try:
                return coordinates(bases[target], mat_mul(matrix, bases[source]))
            except ShapeMismatchError as e:
                raise NonNaturalError("Lattices are not stable under the structure maps") from e

        try:
            values = tuple(
                AbGroupPresentation(b.shape[1], coordinates(b, v.relations))
                for b, v in zip(bases, self.values, strict=True)
            )
        except ShapeMismatchError as e:
            raise NonNaturalError("Sub-lattice does not contain the relations") from e
        return MackeyData(
            group=self.group,
            values=values,
            ind={tm: restrict_to(tm.target, m, tm.source) for tm, m in self.ind.items()},
            res={tm: restrict_to(tm.source, m, tm.target) for tm, m in self.res.items()},
            inner={key: restrict_to(key[0], m, key[0]) for key, m in self.inner.items()},
            name=name or f"sub({self.name})",
            pre_only=self.pre_only,
        )

    def quotient(self, lattices: Sequence[IntMatrix], name: str = "") -> "MackeyData":
        """Quotient by lattices containing the relations; matrices are unchanged."""
        values = tuple(
            AbGroupPresentation(v.n_generators, lattice_sum(v.relations, b) if b.shape[1] else v.relations)
            for v, b in zip(self.values, lattices, strict=True)
        )
        return MackeyData(
            group=self.group,
            values=values,
            ind=self.ind,
            res=self.res,
            inner=self.inner,
            name=name or f"quotient({self.name})",
            pre_only=self.pre_only,
        )

    def direct_sum(self, other: "MackeyData", name: str = "") -> "MackeyData":
        if other.group is not self.group:
            raise SiteMismatchError("Direct sum of functors over different groups")
        values = tuple(
            AbGroupPresentation.direct_sum([a, b]) for a, b in zip(self.values, other.values, strict=True)
        )
        keys = set(self.inner) | set(other.inner)
        return MackeyData(
            group=self.group,
            values=values,
            ind={tm: block_diagonal([self.ind[tm], other.ind[tm]]) for tm in self.ind},
            res={tm: block_diagonal([self.res[tm], other.res[tm]]) for tm in self.res},
            inner={k: block_diagonal([self.inner_matrix(*k), other.inner_matrix(*k)]) for k in keys},
            name=name or f"{self.name}+{other.name}",
            pre_only=self.pre_only or other.pre_only,
        )

    def to_dict(self) -> dict[str, Any]:
        classes = self.group.lattice.classes
        return {
            "name": self.name,
            "group": self.group.name,
            "pre_only": self.pre_only,
            "values": [
                {"class": c.label, **v.to_dict()} for c, v in zip(classes, self.values, strict=True)
            ],
        }


def evaluate(m: MackeyData, s: GSet) -> AbGroupPresentation:
    return m.evaluate(s)


def structure_map(m: MackeyData, f: GMap, direction: Direction = COVARIANT) -> IntMatrix:
    return m.map(f, direction)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _square(group: Group, f: TransitiveMap, f2: TransitiveMap) -> Pullback:
    return pullback(GMap.transitive(group, f), GMap.transitive(group, f2))


def validate_mackey(m: MackeyData) -> ValidationReport:
    """Check every axiom of a Mackey functor on the tabulated data.

    Covers well-definedness on relations, identities, inner conjugations,
    composition in both directions, the pullback axiom on every square of
    transitive maps with a common target, and additivity on two-orbit unions.
    """
    group = m.group
    values = m.values
    report = ValidationReport(m.name or "functor", group.name)
    maps = transitive_maps(group)

    for tm in maps:
        report.check(
            "relations",
            values[tm.target].vanishes(mat_mul(m.ind[tm], values[tm.source].relations))
            and values[tm.source].vanishes(mat_mul(m.res[tm], values[tm.target].relations)),
            lambda tm=tm: {"map": _map_dict(group, tm)},
        )
        if tm.source == tm.target and tm.element == 0:
            n = values[tm.source].n_generators
            report.check(
                "identity",
                values[tm.source].maps_equal(m.ind[tm], identity(n))
                and values[tm.source].maps_equal(m.res[tm], identity(n)),
                lambda tm=tm: {"map": _map_dict(group, tm)},
            )

    for (h, x), matrix in sorted(m.inner.items()):
        value = values[h]
        report.check(
            "inner-conjugation",
            value.vanishes(mat_mul(matrix, value.relations))
            and value.maps_equal(matrix, identity(value.n_generators)),
            lambda h=h, x=x, matrix=matrix: {
                "class": group.lattice.classes[h].label,
                "element": x,
                "element_label": group.labels[x],
                "matrix": to_lists(matrix),
            },
        )

    into: dict[int, list[TransitiveMap]] = defaultdict(list)
    out_of: dict[int, list[TransitiveMap]] = defaultdict(list)
    for tm in maps:
        into[tm.target].append(tm)
        out_of[tm.source].append(tm)

    for k in range(len(values)):
        for f1 in into[k]:
            for f2 in out_of[k]:
                f12 = compose_transitive(group, f1, f2)
                lhs = mat_mul(m.ind[f2], m.ind[f1])
                report.check(
                    "composition-covariant",
                    values[f12.target].maps_equal(lhs, m.ind[f12]),
                    lambda f1=f1, f2=f2, f12=f12, lhs=lhs: {
                        "first": _map_dict(group, f1),
                        "second": _map_dict(group, f2),
                        "composite": to_lists(lhs),
                        "expected": to_lists(m.ind[f12]),
                    },
                )
                lhs = mat_mul(m.res[f1], m.res[f2])
                report.check(
                    "composition-contravariant",
                    values[f12.source].maps_equal(lhs, m.res[f12]),
                    lambda f1=f1, f2=f2, f12=f12, lhs=lhs: {
                        "first": _map_dict(group, f1),
                        "second": _map_dict(group, f2),
                        "composite": to_lists(lhs),
                        "expected": to_lists(m.res[f12]),
                    },
                )

    for target in range(len(values)):
        for f in into[target]:
            for f2 in into[target]:
                square = _square(group, f, f2)
                lhs = mat_mul(m.res[f2], m.ind[f])
                rhs = mat_mul(m.covariant(square.right), m.contravariant(square.left))
                report.check(
                    "pullback",
                    values[f2.source].maps_equal(lhs, rhs),
                    lambda f=f, f2=f2, square=square, lhs=lhs, rhs=rhs: {
                        "maps": {
                            "induce": _map_dict(group, f),
                            "restrict": _map_dict(group, f2),
                            "left_projection": square.left.to_dict(),
                            "right_projection": square.right.to_dict(),
                        },
                        "restrict_after_induce": to_lists(lhs),
                        "induce_after_restrict": to_lists(rhs),
                    },
                )

    n_classes = len(values)
    for a in range(n_classes):
        for b in range(a, n_classes):
            s1, s2 = GSet.transitive(group, a), GSet.transitive(group, b)
            union, e1, e2 = coproduct(s1, s2)
            total = m.evaluate(union)
            n1, n2 = values[a].n_generators, values[b].n_generators
            ok = (
                values[a].maps_equal(mat_mul(m.contravariant(e1), m.covariant(e1)), identity(n1))
                and values[b].maps_equal(mat_mul(m.contravariant(e2), m.covariant(e2)), identity(n2))
                and values[b].vanishes(mat_mul(m.contravariant(e2), m.covariant(e1)))
                and values[a].vanishes(mat_mul(m.contravariant(e1), m.covariant(e2)))
                and total.maps_equal(
                    mat_mul(m.covariant(e1), m.contravariant(e1))
                    + mat_mul(m.covariant(e2), m.contravariant(e2)),
                    identity(total.n_generators),
                )
            )
            report.check(
                "additivity",
                ok,
                lambda a=a, b=b: {"orbits": [group.lattice.classes[a].label, group.lattice.classes[b].label]},
            )

    logger.info(
        f"Validated {report.subject} over {group.name}: "
        f"{sum(report.checked.values())} identities, {len(report.defects)} defects"
    )
    return report


# ---------------------------------------------------------------------------
# Green rings
# ---------------------------------------------------------------------------


def _bilinear(tensor: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.zeros(tensor.shape[2], dtype=object)
    for i in np.flatnonzero(u != 0):
        for j in np.flatnonzero(v != 0):
            out = out + u[i] * v[j] * tensor[i, j]
    return out


def _basis_vector(n: int, i: int) -> np.ndarray:
    vec = np.zeros(n, dtype=object)
    vec[i] = 1
    return vec


@dataclass(frozen=True, eq=False)
class GreenRingData:
    """A Mackey functor with a product and unit at every transitive G-set."""

    base: MackeyData
    mult: tuple[np.ndarray, ...]
    units: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        for c, (value, tensor, unit) in enumerate(
            zip(self.base.values, self.mult, self.units, strict=True)
        ):
            n = value.n_generators
            if tensor.shape != (n, n, n) or unit.shape != (n,):
                raise ShapeMismatchError(f"Product data at class {c} does not match rank {n}")

    @property
    def group(self) -> Group:
        return self.base.group

    @property
    def name(self) -> str:
        return self.base.name

    def __repr__(self) -> str:
        return f"GreenRingData({self.name!r}, {self.group.name})"

    def multiply_at(self, c: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return _bilinear(self.mult[c], u, v)

    def multiply(self, s: GSet, u: Sequence[Any], v: Sequence[Any]) -> np.ndarray:
        """Product in G(S), orbit by orbit."""
        offsets = self.base.offsets(s)
        u_arr = np.array(list(u), dtype=object)
        v_arr = np.array(list(v), dtype=object)
        out = np.zeros(offsets[-1], dtype=object)
        for i, c in enumerate(s.instances):
            block = slice(offsets[i], offsets[i + 1])
            out[block] = self.multiply_at(c, u_arr[block], v_arr[block])
        return out

    def unit(self, s: GSet) -> np.ndarray:
        parts = [self.units[c] for c in s.instances]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=object)

    @cached_property
    def report(self) -> ValidationReport:
        return validate_green(self)

    def quotient(self, lattices: Sequence[IntMatrix], name: str = "") -> "GreenRingData":
        return GreenRingData(self.base.quotient(lattices, name), self.mult, self.units)

    def sub(self, lattices: Sequence[IntMatrix], name: str = "") -> "GreenRingData":
        """Subring on lattices containing the relations, the products and the unit."""
        base = self.base.sub(lattices, name)
        mult = []
        units = []
        for c, b in enumerate(lattices):
            basis = hermite_basis(b)
            n = basis.shape[1]
            tensor = np.zeros((n, n, n), dtype=object)
            for i in range(n):
                for j in range(n):
                    prod = self.multiply_at(c, basis[:, i], basis[:, j])
                    try:
                        tensor[i, j] = coordinates(basis, prod.reshape(-1, 1))[:, 0]
                    except ShapeMismatchError as e:
                        raise NonNaturalError("Lattice is not closed under the product") from e
            mult.append(tensor)
            try:
                units.append(coordinates(basis, self.units[c].reshape(-1, 1))[:, 0])
            except ShapeMismatchError as e:
                raise NonNaturalError("Lattice does not contain the unit") from e
        return GreenRingData(base, tuple(mult), tuple(units))

    def product(self, other: "GreenRingData", name: str = "") -> "GreenRingData":
        """Direct product ring, with A acting diagonally."""
        base = self.base.direct_sum(other.base, name or f"{self.name}x{other.name}")
        mult = []
        units = []
        for a, b, ua, ub in zip(self.mult, other.mult, self.units, other.units, strict=True):
            na, nb = a.shape[0], b.shape[0]
            tensor = np.zeros((na + nb,) * 3, dtype=object)
            tensor[:na, :na, :na] = a
            tensor[na:, na:, na:] = b
            mult.append(tensor)
            units.append(np.concatenate([ua, ub]))
        return GreenRingData(base, tuple(mult), tuple(units))


def validate_green(g: GreenRingData) -> ValidationReport:
    """Ring axioms per class plus compatibility of the product with the structure maps.

    Every identity is tested on all basis pairs or triples.
    """
    base = g.base
    group = base.group
    report = ValidationReport(f"{g.name} (Green)", group.name)
    for c, value in enumerate(base.values):
        n = value.n_generators
        e = [_basis_vector(n, i) for i in range(n)]
        unit = g.units[c]
        for i in range(value.relations.shape[1]):
            r = value.relations[:, i]
            for j in range(n):
                report.check(
                    "product-relations",
                    value.vanishes(g.multiply_at(c, r, e[j]).reshape(-1, 1))
                    and value.vanishes(g.multiply_at(c, e[j], r).reshape(-1, 1)),
                    lambda c=c, i=i, j=j: {"class": c, "relation": i, "generator": j},
                )
        for i in range(n):
            report.check(
                "unit",
                value.maps_equal(g.multiply_at(c, unit, e[i]).reshape(-1, 1), e[i].reshape(-1, 1))
                and value.maps_equal(g.multiply_at(c, e[i], unit).reshape(-1, 1), e[i].reshape(-1, 1)),
                lambda c=c, i=i: {"class": c, "generator": i},
            )
            for j in range(n):
                ij = g.multiply_at(c, e[i], e[j])
                for k in range(n):
                    lhs = g.multiply_at(c, ij, e[k])
                    rhs = g.multiply_at(c, e[i], g.multiply_at(c, e[j], e[k]))
                    report.check(
                        "associativity",
                        value.maps_equal(lhs.reshape(-1, 1), rhs.reshape(-1, 1)),
                        lambda c=c, i=i, j=j, k=k: {"class": c, "triple": [i, j, k]},
                    )

    for tm in transitive_maps(group):
        h, k = tm.source, tm.target
        vh, vk = base.values[h], base.values[k]
        ind, res = base.ind[tm], base.res[tm]
        eh = [_basis_vector(vh.n_generators, i) for i in range(vh.n_generators)]
        ek = [_basis_vector(vk.n_generators, i) for i in range(vk.n_generators)]
        report.check(
            "unit-restriction",
            vh.maps_equal(apply(res, g.units[k]).reshape(-1, 1), g.units[h].reshape(-1, 1)),
            lambda tm=tm: {"map": _map_dict(group, tm)},
        )
        for a, x in enumerate(ek):
            rx = apply(res, x)
            for b, x2 in enumerate(ek):
                lhs = apply(res, g.multiply_at(k, x, x2))
                rhs = g.multiply_at(h, rx, apply(res, x2))
                report.check(
                    "restriction-multiplicative",
                    vh.maps_equal(lhs.reshape(-1, 1), rhs.reshape(-1, 1)),
                    lambda tm=tm, a=a, b=b: {"map": _map_dict(group, tm), "pair": [a, b]},
                )
            for b, y in enumerate(eh):
                iy = apply(ind, y)
                lhs = apply(ind, g.multiply_at(h, rx, y))
                rhs = g.multiply_at(k, x, iy)
                report.check(
                    "frobenius-left",
                    vk.maps_equal(lhs.reshape(-1, 1), rhs.reshape(-1, 1)),
                    lambda tm=tm, a=a, b=b: {"map": _map_dict(group, tm), "pair": [a, b]},
                )
                lhs = apply(ind, g.multiply_at(h, y, rx))
                rhs = g.multiply_at(k, iy, x)
                report.check(
                    "frobenius-right",
                    vk.maps_equal(lhs.reshape(-1, 1), rhs.reshape(-1, 1)),
                    lambda tm=tm, a=a, b=b: {"map": _map_dict(group, tm), "pair": [a, b]},
                )
    logger.info(
        f"Validated Green structure of {g.name} over {group.name}: {len(report.defects)} defects"
    )
    return report


def is_green_module(m: MackeyData, ring: GreenRingData) -> ValidationReport:
    """Check that a quotient of the Burnside ring acts on m through the Burnside action.

    The relations of `ring` must act as zero, its unit as the identity, and
    the action must be associative on basis pairs.
    """
    group = m.group
    report = ValidationReport(f"{m.name} over {ring.name}", group.name)
    for c, value in enumerate(ring.base.values):
        site = GSet.transitive(group, c)
        a_ring = burnside_ring(site)
        if a_ring.rank != value.n_generators:
            raise ShapeMismatchError("Ring is not presented on the Burnside basis")
        target = m.evaluate(site)
        acting = [action_matrix(a_ring.basis_element(i), m) for i in range(a_ring.rank)]

        def act_vec(vec: np.ndarray, acting: list[IntMatrix] = acting, target: Any = target) -> IntMatrix:
            out = zeros(target.n_generators, target.n_generators)
            for i, coeff in enumerate(vec):
                if coeff != 0:
                    out = out + coeff * acting[i]
            return out

        for i in range(value.relations.shape[1]):
            report.check(
                "ideal-acts-trivially",
                target.vanishes(act_vec(value.relations[:, i])),
                lambda c=c, i=i: {"class": c, "relation": i},
            )
        report.check(
            "unit-acts-as-identity",
            target.maps_equal(act_vec(ring.units[c]), identity(target.n_generators)),
            lambda c=c: {"class": c},
        )
        for i in range(a_ring.rank):
            for j in range(a_ring.rank):
                prod = ring.multiply_at(c, _basis_vector(a_ring.rank, i), _basis_vector(a_ring.rank, j))
                report.check(
                    "action-associative",
                    target.maps_equal(mat_mul(acting[i], acting[j]), act_vec(prod)),
                    lambda c=c, i=i, j=j: {"class": c, "pair": [i, j]},
                )
    return report


# ---------------------------------------------------------------------------
# built-in functors
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def burnside_functor(group: Group) -> GreenRingData:
    """A(G/H) at every class, with the fibre-product ring structure."""
    n_classes = len(group.lattice)
    rings = [burnside_ring(GSet.transitive(group, c)) for c in range(n_classes)]
    ind, res = {}, {}
    for tm in transitive_maps(group):
        f = GMap.transitive(group, tm)
        ring = rings[tm.source]
        ind[tm] = ring.induction_matrix(f)
        res[tm] = ring.restriction_matrix(f)
    base = MackeyData(
        group=group,
        values=tuple(AbGroupPresentation.free(r.rank) for r in rings),
        ind=ind,
        res=res,
        name="burnside",
    )
    logger.info(f"Tabulated the Burnside functor of {group.name} on {n_classes} classes")
    return GreenRingData(
        base,
        tuple(r.product_tensor for r in rings),
        tuple(r.unit_vector for r in rings),
    )


def character_kernel(group: Group, class_index: int) -> IntMatrix:
    """Elements of A(H) whose permutation character vanishes (marks at cyclic subgroups)."""
    h = group.lattice.rep(class_index)
    local = group.lattice.local_classes(h)
    cyclic = [c for c, k in enumerate(local.representatives) if k.is_cyclic()]
    table = local_table_of_marks(h)
    return kernel(as_int_matrix(table[:, cyclic].T, len(cyclic), len(local)))


@lru_cache(maxsize=None)
def perm_char_green_ring(group: Group) -> GreenRingData:
    """Permutation characters: A(H) modulo the kernel of the character map.

    Induction, restriction and products are those of the Burnside ring,
    which preserve the kernel.
    """
    burnside = burnside_functor(group)
    lattices = [character_kernel(group, c) for c in range(len(group.lattice))]
    return burnside.quotient(lattices, name="permchar")


def fixed_point_green_ring(group: Group) -> GreenRingData:
    """Z at every class: restriction 1, induction by the index, ordinary product."""
    lattice = group.lattice
    ind, res = {}, {}
    for tm in transitive_maps(group):
        index = lattice.classes[tm.target].order // lattice.classes[tm.source].order
        ind[tm] = as_int_matrix([[index]])
        res[tm] = as_int_matrix([[1]])
    base = MackeyData(
        group=group,
        values=tuple(AbGroupPresentation.free(1) for _ in range(len(lattice))),
        ind=ind,
        res=res,
        name="fixed-point",
    )
    one = np.ones((1, 1, 1), dtype=object)
    return GreenRingData(base, (one,) * len(lattice), (np.ones(1, dtype=object),) * len(lattice))


def fixed_point_functor(group: Group) -> MackeyData:
    return fixed_point_green_ring(group).base


def signed_pre_functor(group: Group, omega: Orientation) -> MackeyData:
    """The fixed-point functor twisted by w on coset representatives.

    Induction along eH -> gK is w(g)[K : g^-1 H g], restriction is w(g), and
    x in H acts on the value at H by w(x). This is a Mackey functor exactly
    when w is trivial.
    """
    if omega.group is not group:
        raise SiteMismatchError("Orientation belongs to a different group")
    lattice = group.lattice
    ind, res = {}, {}
    for tm in transitive_maps(group):
        sign = omega(tm.element)
        index = lattice.classes[tm.target].order // lattice.classes[tm.source].order
        ind[tm] = as_int_matrix([[sign * index]])
        res[tm] = as_int_matrix([[sign]])
    inner = {
        (c.index, x): as_int_matrix([[-1]])
        for c in lattice.classes
        for x in c.representative.elements
        if omega(x) == -1
    }
    return MackeyData(
        group=group,
        values=tuple(AbGroupPresentation.free(1) for _ in range(len(lattice))),
        ind=ind,
        res=res,
        inner=inner,
        name="signed" if not omega.is_trivial else "signed(trivial)",
        pre_only=True,
    )


def zero_functor(group: Group) -> MackeyData:
    empty = zeros(0, 0)
    maps = transitive_maps(group)
    return MackeyData(
        group=group,
        values=tuple(AbGroupPresentation.free(0) for _ in range(len(group.lattice))),
        ind={tm: empty for tm in maps},
        res={tm: empty for tm in maps},
        name="zero",
    )


def zero_green_ring(group: Group) -> GreenRingData:
    n = len(group.lattice)
    return GreenRingData(
        zero_functor(group),
        (np.zeros((0, 0, 0), dtype=object),) * n,
        (np.zeros(0, dtype=object),) * n,
    )


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MackeyHom:
    """theta_H: M(G/H) -> N(G/H) for every class, as generator matrices."""

    source: MackeyData
    target: MackeyData
    components: tuple[IntMatrix, ...]

    def __post_init__(self) -> None:
        if self.source.group is not self.target.group:
            raise SiteMismatchError("Homomorphism between functors over different groups")
        for c, theta in enumerate(self.components):
            shape = (self.target.values[c].n_generators, self.source.values[c].n_generators)
            if theta.shape != shape:
                raise ShapeMismatchError(f"Component at class {c} has shape {theta.shape}, expected {shape}")

    def naturality(self) -> ValidationReport:
        src, tgt = self.source, self.target
        group = src.group
        report = ValidationReport(f"{src.name} -> {tgt.name}", group.name)
        theta = self.components
        for c, matrix in enumerate(theta):
            report.check(
                "relations",
                tgt.values[c].vanishes(mat_mul(matrix, src.values[c].relations)),
                lambda c=c: {"class": c},
            )
        for tm in transitive_maps(group):
            h, k = tm.source, tm.target
            report.check(
                "commutes-with-induction",
                tgt.values[k].maps_equal(mat_mul(theta[k], src.ind[tm]), mat_mul(tgt.ind[tm], theta[h])),
                lambda tm=tm: {"map": _map_dict(group, tm)},
            )
            report.check(
                "commutes-with-restriction",
                tgt.values[h].maps_equal(mat_mul(theta[h], src.res[tm]), mat_mul(tgt.res[tm], theta[k])),
                lambda tm=tm: {"map": _map_dict(group, tm)},
            )
        for h, x in sorted(set(src.inner) | set(tgt.inner)):
            report.check(
                "commutes-with-conjugation",
                tgt.values[h].maps_equal(
                    mat_mul(theta[h], src.inner_matrix(h, x)), mat_mul(tgt.inner_matrix(h, x), theta[h])
                ),
                lambda h=h, x=x: {"class": h, "element": x},
            )
        return report

    @property
    def is_natural(self) -> bool:
        return self.naturality().ok


def identity_hom(m: MackeyData) -> MackeyHom:
    return MackeyHom(m, m, tuple(identity(v.n_generators) for v in m.values))


def scalar_hom(m: MackeyData, n: int) -> MackeyHom:
    return MackeyHom(m, m, tuple(n * identity(v.n_generators) for v in m.values))


def projection_hom(source: MackeyData, target: MackeyData) -> MackeyHom:
    """The identity on generators, for a target presented as a quotient of the source."""
    return MackeyHom(source, target, tuple(identity(v.n_generators) for v in source.values))


def hom_kernel_image(theta: MackeyHom) -> tuple[MackeyData, MackeyData, MackeyData]:
    """Kernel, image and cokernel of a natural transformation."""
    report = theta.naturality()
    if not report.ok:
        raise NonNaturalError(
            f"Transformation is not natural ({len(report.defects)} failed squares, "
            f"first: {report.defects[0].kind})"
        )
    src, tgt = theta.source, theta.target
    kernels, images = [], []
    for c, matrix in enumerate(theta.components):
        rel = tgt.values[c].relations
        n = src.values[c].n_generators
        stacked = hstack([matrix, -rel], tgt.values[c].n_generators)
        null = kernel(stacked) if stacked.shape[1] else zeros(n, 0)
        kernels.append(hermite_basis(null[:n]))
        images.append(lattice_sum(matrix, rel))
    kern = src.sub(kernels, name=f"ker({src.name}->{tgt.name})")
    image = src.quotient(kernels, name=f"im({src.name}->{tgt.name})")
    coker = tgt.quotient(images, name=f"coker({src.name}->{tgt.name})")
    logger.info(
        "Kernel/image/cokernel ranks at the top class: "
        f"{kern.values[-1].invariants.describe()} / {image.values[-1].invariants.describe()} / "
        f"{coker.values[-1].invariants.describe()}"
    )
    return kern, image, coker


def functor_by_name(group: Group, name: str, omega: Orientation | None = None) -> MackeyData | GreenRingData:
    """Built-in functors by CLI name."""
    if name == "burnside":
        return burnside_functor(group)
    if name == "permchar":
        return perm_char_green_ring(group)
    if name == "fixed":
        return fixed_point_green_ring(group)
    if name == "zero":
        return zero_green_ring(group)
    if name == "signed":
        return signed_pre_functor(group, omega or Orientation.trivial(group))
    raise ConfigError(f"Unknown functor '{name}'")
