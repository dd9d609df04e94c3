"""Chain complexes of finitely presented abelian groups, their contractions and repair.

A `ChainData` is a homological (boundaries d_r: C_r -> C_{r-1}) or
cohomological (coboundaries d^r: C^r -> C^{r+1}) pre-complex in degrees
0..N, optionally with a contraction and a filtration. Pre-complexes whose
associated graded is contracted are repaired into genuinely contracted
complexes by a degree-by-degree perturbation that never touches d_1.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Literal

import numpy as np

from .exceptions import (
    BurnsideError,
    ConfigError,
    NotComplexError,
    NotContractedError,
    NotNilpotentError,
    ShapeMismatchError,
)
from .mackey import AbGroupPresentation
from .zlocal import (
    GENERIC,
    INTEGRAL,
    CokernelInvariants,
    IntMatrix,
    Locale,
    as_int_matrix,
    block_diagonal,
    cokernel_invariants,
    coordinates,
    equal,
    fraction_mod,
    hermite_basis,
    hstack,
    identity,
    kernel,
    lattice_contains,
    mat_mul,
    reduce_mod,
    to_lists,
    zeros,
)

logger = logging.getLogger(__name__)

Variant = Literal["homological", "cohomological"]
HOMOLOGICAL: Variant = "homological"
COHOMOLOGICAL: Variant = "cohomological"


@dataclass(frozen=True, eq=False)
class Filtration:
    """Descending filtration F_0 = C ⊇ F_1 ⊇ ... ⊇ F_depth of every chain group.

    Either explicit lattices (`levels[r][i]` a basis of F_i C_r, with
    F_depth C_r = 0) or the 2-power filtration F_i = 2^i C.
    """

    depth: int
    levels: tuple[tuple[IntMatrix, ...], ...] = ()
    two_adic: bool = False

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ConfigError(f"Filtration depth must be positive, got {self.depth}")
        for r, per_degree in enumerate(self.levels):
            if len(per_degree) != self.depth + 1:
                raise ShapeMismatchError(
                    f"Degree {r} has {len(per_degree)} filtration levels, expected {self.depth + 1}"
                )

    @classmethod
    def power_of_two(cls, depth: int) -> "Filtration":
        return cls(depth, two_adic=True)

    @classmethod
    def coordinate(cls, level_of: list[list[int]], depth: int) -> "Filtration":
        """F_i spanned by the basis vectors whose level is at least i."""
        levels = []
        for per_vector in level_of:
            n = len(per_vector)
            eye = identity(n)
            levels.append(tuple(
                eye[:, [k for k in range(n) if per_vector[k] >= i]] if n else zeros(0, 0)
                for i in range(depth + 1)
            ))
        return cls(depth, tuple(levels))

    @classmethod
    def trivial(cls, ranks: list[int]) -> "Filtration":
        return cls(1, tuple((identity(n), zeros(n, 0)) for n in ranks))

    def level(self, r: int, i: int, rank: int) -> IntMatrix:
        if self.two_adic:
            return (2 ** i) * identity(rank)
        return self.levels[r][min(i, self.depth)]

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"depth": self.depth, "two_adic": self.two_adic}
        if self.levels:
            data["levels"] = [[to_lists(b.T) for b in per_degree] for per_degree in self.levels]
        return data


def _matrix_to_json(m: np.ndarray) -> list[list[Any]]:
    return [
        [
            {"num": v.numerator, "den": v.denominator}
            if isinstance(v, Fraction) and v.denominator != 1 else int(v)
            for v in row
        ]
        for row in m
    ]


def _matrix_from_json(data: list[list[Any]], rows: int, cols: int) -> np.ndarray:
    out = zeros(rows, cols)
    if len(data) != rows:
        raise ShapeMismatchError(f"Matrix has {len(data)} rows, expected {rows}")
    for i, row in enumerate(data):
        if len(row) != cols:
            raise ShapeMismatchError(f"Row {i} has {len(row)} entries, expected {cols}")
        for j, value in enumerate(row):
            if isinstance(value, dict):
                out[i, j] = Fraction(int(value["num"]), int(value["den"]))
            else:
                out[i, j] = int(value)
    return out


def _is_integral(m: np.ndarray) -> bool:
    return all(not isinstance(v, Fraction) or v.denominator == 1 for v in m.flat)


def _as_integral(m: np.ndarray) -> IntMatrix:
    out = zeros(*m.shape)
    for idx, value in np.ndenumerate(m):
        out[idx] = int(value)
    return out


@dataclass(frozen=True, eq=False)
class ChainData:
    """A (pre-)complex with optional contraction and filtration.

    Homological: maps[r - 1] = d_r: C_r -> C_{r-1} for r = 1..N and
    contraction[r] = s_r: C_r -> C_{r+1} for r = 0..N-1.
    Cohomological: maps[r] = d^r: C^r -> C^{r+1} for r = 0..N-1 and
    contraction[r - 1] = s^r: C^r -> C^{r-1} for r = 1..N.
    A nonzero modulus means all arithmetic is in Z/modulus.
    """

    groups: tuple[AbGroupPresentation, ...]
    maps: tuple[np.ndarray, ...]
    variant: Variant = HOMOLOGICAL
    contraction: tuple[np.ndarray, ...] | None = None
    filtration: Filtration | None = None
    modulus: int = 0
    locale: Locale = INTEGRAL
    label: str = ""

    def __post_init__(self) -> None:
        if self.variant not in (HOMOLOGICAL, COHOMOLOGICAL):
            raise ConfigError(f"Unknown variant '{self.variant}'")
        n = self.ranks
        top = len(n) - 1
        if len(self.maps) != top:
            raise ShapeMismatchError(f"{len(self.maps)} maps for degrees 0..{top}")
        for r, m in enumerate(self.maps):
            expected = (n[r], n[r + 1]) if self.variant == HOMOLOGICAL else (n[r + 1], n[r])
            if m.shape != expected:
                raise ShapeMismatchError(f"Map {r} has shape {m.shape}, expected {expected}")
        if self.contraction is not None:
            if len(self.contraction) != top:
                raise ShapeMismatchError(f"{len(self.contraction)} contraction maps for {top} degrees")
            for r, s in enumerate(self.contraction):
                expected = (n[r + 1], n[r]) if self.variant == HOMOLOGICAL else (n[r], n[r + 1])
                if s.shape != expected:
                    raise ShapeMismatchError(f"Contraction {r} has shape {s.shape}, expected {expected}")

    @property
    def ranks(self) -> list[int]:
        return [g.n_generators for g in self.groups]

    @property
    def top_degree(self) -> int:
        return len(self.groups) - 1

    def boundary(self, r: int) -> np.ndarray:
        """d_r: C_r -> C_{r-1} (homological, 1 <= r <= N)."""
        return self.maps[r - 1]

    def coboundary(self, r: int) -> np.ndarray:
        """d^r: C^r -> C^{r+1} (cohomological, 0 <= r <= N-1)."""
        return self.maps[r]

    def homotopy(self, r: int) -> np.ndarray:
        """s_r: C_r -> C_{r+1}, or s^r: C^r -> C^{r-1} for cohomological data."""
        if self.contraction is None:
            raise NotContractedError("Chain data carries no contraction")
        return self.contraction[r] if self.variant == HOMOLOGICAL else self.contraction[r - 1]

    @cached_property
    def effective_groups(self) -> tuple[AbGroupPresentation, ...]:
        """Chain groups with modulus * C added to the relations."""
        if not self.modulus:
            return self.groups
        return tuple(
            AbGroupPresentation(g.n_generators, hstack(
                [g.relations, self.modulus * identity(g.n_generators)], g.n_generators
            ))
            for g in self.groups
        )

    def square_defects(self) -> list[tuple[int, np.ndarray]]:
        """(degree, d∘d) for every composable pair, indexed by the target degree."""
        out = []
        for r in range(self.top_degree - 1):
            if self.variant == HOMOLOGICAL:
                out.append((r, mat_mul(self.boundary(r + 1), self.boundary(r + 2))))
            else:
                out.append((r + 2, mat_mul(self.coboundary(r + 1), self.coboundary(r))))
        return out

    def is_complex(self) -> bool:
        groups = self.effective_groups
        return all(groups[r].vanishes(m) for r, m in self.square_defects())

    def reduced(self, modulus: int) -> "ChainData":
        """The same data in Z/modulus; rational entries must have denominators prime to it."""

        def red(m: np.ndarray) -> IntMatrix:
            out = zeros(*m.shape)
            for idx, value in np.ndenumerate(m):
                out[idx] = fraction_mod(value, modulus)
            return out

        return ChainData(
            groups=self.groups,
            maps=tuple(red(m) for m in self.maps),
            variant=self.variant,
            contraction=None if self.contraction is None else tuple(red(s) for s in self.contraction),
            filtration=self.filtration,
            modulus=modulus,
            locale=self.locale,
            label=self.label,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "variant": self.variant,
            "modulus": self.modulus,
            "locale": self.locale,
            "ranks": self.ranks,
            "relations": [to_lists(g.relations.T) for g in self.groups],
            "maps": [_matrix_to_json(m) for m in self.maps],
            "contraction": None if self.contraction is None else [
                _matrix_to_json(s) for s in self.contraction
            ],
            "filtration": None if self.filtration is None else self.filtration.to_dict(),
            "is_complex": self.is_complex(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ChainData":
        ranks = [int(n) for n in data["ranks"]]
        variant = data.get("variant", HOMOLOGICAL)
        relations = data.get("relations") or [[] for _ in ranks]
        groups = tuple(
            AbGroupPresentation(n, as_int_matrix(rel, len(rel), n).T if rel else zeros(n, 0))
            for n, rel in zip(ranks, relations, strict=True)
        )

        def shape(r: int, forward: bool) -> tuple[int, int]:
            homological = variant == HOMOLOGICAL
            if forward == homological:
                return ranks[r], ranks[r + 1]
            return ranks[r + 1], ranks[r]

        maps = tuple(
            _matrix_from_json(m, *shape(r, True)) for r, m in enumerate(data["maps"])
        )
        contraction = None
        if data.get("contraction") is not None:
            contraction = tuple(
                _matrix_from_json(s, *shape(r, False)) for r, s in enumerate(data["contraction"])
            )
        filtration = None
        if data.get("filtration"):
            spec = data["filtration"]
            levels = tuple(
                tuple(
                    as_int_matrix(b, len(b), ranks[r]).T if b else zeros(ranks[r], 0)
                    for b in per_degree
                )
                for r, per_degree in enumerate(spec.get("levels", []))
            )
            filtration = Filtration(int(spec["depth"]), levels, bool(spec.get("two_adic", False)))
        locale = data.get("locale", INTEGRAL)
        return cls(
            groups=groups,
            maps=maps,
            variant=variant,
            contraction=contraction,
            filtration=filtration,
            modulus=int(data.get("modulus", 0)),
            locale=locale if locale in (INTEGRAL, GENERIC) else int(locale),
            label=data.get("label", ""),
        )


def load_chain(path: str | Path) -> ChainData:
    with open(path) as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path} is not valid JSON: {e}") from e
    try:
        return ChainData.from_dict(data)
    except BurnsideError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ConfigError(f"Malformed chain data in {path}: {e!r}") from e


def save_chain(chain: ChainData, path: str | Path) -> None:
    with open(path, "w") as f:
        json.dump(chain.to_dict(), f, indent=2)


# ---------------------------------------------------------------------------
# exactness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactnessReport:
    variant: Variant
    locale: Locale
    homology: dict[int, CokernelInvariants]

    def vanishes(self, r: int) -> bool:
        inv = self.homology[r]
        if self.locale == INTEGRAL:
            return inv.is_zero
        if self.locale == GENERIC:
            return inv.free_rank == 0
        return inv.localized(int(self.locale)).is_zero

    @property
    def exact(self) -> bool:
        return all(self.vanishes(r) for r in self.homology)

    @property
    def nonzero_degrees(self) -> list[int]:
        return [r for r in sorted(self.homology) if not self.vanishes(r)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "locale": self.locale,
            "exact": self.exact,
            "homology": {
                str(r): {**inv.to_dict(), "vanishes": self.vanishes(r)}
                for r, inv in sorted(self.homology.items())
            },
        }


def _cycles(m: np.ndarray, target: AbGroupPresentation, n: int) -> IntMatrix:
    """Basis of {x in Z^n : m x = 0 in the target group}."""
    stacked = hstack([m, -target.relations], m.shape[0])
    if stacked.shape[1] == 0:
        return zeros(n, 0)
    return hermite_basis(kernel(stacked)[:n])


def check_exactness(
    c: ChainData, degrees: list[int] | None = None, locale: Locale | None = None
) -> ExactnessReport:
    """Homology in degrees 0..N-1 (or the requested subset) via Smith normal forms.

    Raises:
        NotComplexError: If d∘d does not vanish.
    """
    if not c.is_complex():
        bad = [r for r, m in c.square_defects() if not c.effective_groups[r].vanishes(m)]
        raise NotComplexError(f"d∘d is nonzero in degrees {bad}")
    locale = c.locale if locale is None else locale
    top = c.top_degree
    wanted = list(range(top)) if degrees is None else sorted(set(degrees))
    for r in wanted:
        if not 0 <= r < top:
            raise ConfigError(f"Homology in degree {r} needs maps up to degree {r + 1} (have {top})")
    groups = c.effective_groups
    homology = {}
    for r in wanted:
        n = groups[r].n_generators
        if c.variant == HOMOLOGICAL:
            z = identity(n) if r == 0 else _cycles(c.boundary(r), groups[r - 1], n)
            incoming = [c.boundary(r + 1)]
        else:
            z = _cycles(c.coboundary(r), groups[r + 1], n)
            incoming = [c.coboundary(r - 1)] if r >= 1 else []
        b = hstack([*incoming, groups[r].relations], n)
        homology[r] = cokernel_invariants(coordinates(z, b)) if z.shape[1] else CokernelInvariants(0)
    report = ExactnessReport(c.variant, locale, homology)
    logger.info(f"Homology of {c.label or 'chain'} at {locale}: nonzero in {report.nonzero_degrees}")
    return report


# ---------------------------------------------------------------------------
# repair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeCertificate:
    degree: int
    square_zero: bool
    contraction_identity: bool
    splitting: bool

    @property
    def ok(self) -> bool:
        return self.square_zero and self.contraction_identity and self.splitting

    def to_dict(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "square_zero": self.square_zero,
            "contraction_identity": self.contraction_identity,
            "splitting": self.splitting,
        }


@dataclass(frozen=True, eq=False)
class RepairResult:
    """Repaired boundaries and contraction with per-degree certificates."""

    chain: ChainData
    certificates: tuple[DegreeCertificate, ...]
    changed_degrees: tuple[int, ...]
    nilpotency: dict[int, int] = field(default_factory=dict)
    first_boundary_unchanged: bool = True

    @property
    def verified(self) -> bool:
        return self.first_boundary_unchanged and all(c.ok for c in self.certificates)

    def boundary(self, r: int) -> np.ndarray:
        return self.chain.boundary(r)

    def contraction(self, r: int) -> np.ndarray:
        return self.chain.homotopy(r)

    def to_dict(self) -> dict[str, Any]:
        return {
            "modulus": self.chain.modulus,
            "verified": self.verified,
            "first_boundary_unchanged": self.first_boundary_unchanged,
            "changed_degrees": list(self.changed_degrees),
            "nilpotency": {str(r): k for r, k in sorted(self.nilpotency.items())},
            "certificates": [c.to_dict() for c in self.certificates],
            "chain": self.chain.to_dict(),
        }


def _certify(c: ChainData) -> tuple[DegreeCertificate, ...]:
    groups = c.effective_groups
    out = []
    for r in range(c.top_degree):
        n = c.ranks[r]
        d_next = c.boundary(r + 1)
        s_r = c.homotopy(r)
        psi = mat_mul(d_next, s_r)
        square_zero = True
        if r >= 1:
            psi = psi + mat_mul(c.homotopy(r - 1), c.boundary(r))
            square_zero = groups[r - 1].vanishes(mat_mul(c.boundary(r), d_next))
        splitting = groups[r].vanishes(d_next - mat_mul(d_next, s_r, d_next))
        out.append(DegreeCertificate(r, square_zero, groups[r].vanishes(psi - identity(n)), splitting))
    return tuple(out)


def _nilpotency_index(u: IntMatrix, group: AbGroupPresentation, depth: int, modulus: int) -> int:
    power = identity(u.shape[0])
    for j in range(1, depth + 1):
        power = reduce_mod(mat_mul(power, u), modulus)
        if group.vanishes(power):
            return j
    raise NotNilpotentError(f"Perturbation u is not nilpotent of order <= {depth}")


def _repair(c: ChainData, depth: int) -> RepairResult:
    if c.variant != HOMOLOGICAL:
        raise ConfigError("Repair runs on homological chain data")
    mod = c.modulus
    top = c.top_degree
    groups = c.effective_groups

    def red(m: np.ndarray) -> IntMatrix:
        return reduce_mod(m, mod)

    d = {r: red(c.boundary(r)) for r in range(1, top + 1)}
    s = {r: red(c.homotopy(r)) for r in range(top)}
    new_d = dict(d)
    new_s: dict[int, IntMatrix] = {}
    nilpotency = {}
    for r in range(top):
        if r >= 1:
            new_d[r + 1] = red(d[r + 1] - mat_mul(new_s[r - 1], new_d[r], d[r + 1]))
        n = c.ranks[r]
        psi = mat_mul(new_d[r + 1], s[r])
        if r >= 1:
            psi = psi + mat_mul(new_s[r - 1], new_d[r])
        u = red(psi - identity(n))
        index = _nilpotency_index(u, groups[r], depth, mod) if n else 1
        nilpotency[r] = index
        inverse = identity(n)
        power = identity(n)
        for _ in range(1, index):
            power = red(mat_mul(power, -u))
            inverse = inverse + power
        new_s[r] = red(mat_mul(s[r], inverse))
    changed = tuple(
        r for r in range(top + 1)
        if (r >= 1 and not equal(new_d[r], d[r], mod))
        or (r < top and not equal(new_s[r], s[r], mod))
    )
    repaired = ChainData(
        groups=c.groups,
        maps=tuple(new_d[r] for r in range(1, top + 1)),
        variant=HOMOLOGICAL,
        contraction=tuple(new_s[r] for r in range(top)),
        filtration=c.filtration,
        modulus=mod,
        locale=c.locale,
        label=f"repaired({c.label})" if c.label else "repaired",
    )
    result = RepairResult(
        chain=repaired,
        certificates=_certify(repaired),
        changed_degrees=changed,
        nilpotency=nilpotency,
        first_boundary_unchanged=top == 0 or equal(new_d[1], d[1], mod),
    )
    logger.info(
        f"Repaired {c.label or 'chain'} (modulus {mod}): changed degrees {list(changed)}, "
        f"verified={result.verified}"
    )
    return result


def _filtration_defects(c: ChainData, filtration: Filtration) -> list[str]:
    """Violations of filtration preservation or of the graded contraction identities."""
    n = c.ranks
    mod = c.modulus
    problems = []

    def level(r: int, i: int) -> IntMatrix:
        return filtration.level(r, i, n[r])

    def inside(r: int, i: int, image: np.ndarray) -> bool:
        return image.shape[1] == 0 or lattice_contains(level(r, i), image, mod)

    for i in range(filtration.depth):
        for r in range(c.top_degree + 1):
            basis = level(r, i)
            if basis.shape[1] == 0:
                continue
            if r >= 1 and not inside(r - 1, i, mat_mul(c.boundary(r), basis)):
                problems.append(f"d_{r} leaves F_{i}")
            if r < c.top_degree:
                s_r = c.homotopy(r)
                if not inside(r + 1, i, mat_mul(s_r, basis)):
                    problems.append(f"s_{r} leaves F_{i}")
                psi = mat_mul(c.boundary(r + 1), s_r)
                if r >= 1:
                    psi = psi + mat_mul(c.homotopy(r - 1), c.boundary(r))
                if not inside(r, i + 1, mat_mul(psi - identity(n[r]), basis)):
                    problems.append(f"sd + ds != 1 on gr_{i} C_{r}")
            if 2 <= r <= c.top_degree:
                square = mat_mul(c.boundary(r - 1), c.boundary(r))
                if not inside(r - 2, i + 1, mat_mul(square, basis)):
                    problems.append(f"d_{r - 1} d_{r} != 0 on gr_{i} C_{r}")
    return problems


def _require_integral(c: ChainData) -> ChainData:
    parts = list(c.maps) + list(c.contraction or ())
    if not all(_is_integral(m) for m in parts):
        raise ShapeMismatchError("Integral repair needs integer matrices; use the truncated repair")
    return ChainData(
        groups=c.groups,
        maps=tuple(_as_integral(m) for m in c.maps),
        variant=c.variant,
        contraction=None if c.contraction is None else tuple(_as_integral(s) for s in c.contraction),
        filtration=c.filtration,
        modulus=c.modulus,
        locale=c.locale,
        label=c.label,
    )


def repair_pseudo_complex(c: ChainData) -> RepairResult:
    """Perturb a filtered pre-complex whose associated graded is contracted into a contracted complex.

    With no filtration the input must already be contracted. The 2-power
    filtration is handled by `repair_filtered_truncated` at its depth.

    Raises:
        NotContractedError: If the filtration is not preserved or gr is not contracted.
        NotNilpotentError: If psi - 1 is not nilpotent within the filtration depth.
    """
    if c.contraction is None:
        raise NotContractedError("Repair needs a candidate contraction")
    if c.filtration is not None and c.filtration.two_adic:
        return repair_filtered_truncated(c, c.filtration.depth)
    c = _require_integral(c)
    filtration = c.filtration or Filtration.trivial(c.ranks)
    problems = _filtration_defects(c, filtration)
    if problems:
        raise NotContractedError(f"Associated graded is not contracted: {'; '.join(problems[:5])}")
    return _repair(c, filtration.depth)


def repair_filtered_truncated(c: ChainData, k: int) -> RepairResult:
    """Repair modulo 2^k for the filtration F_i = 2^i C.

    Rational entries must have odd denominators. The graded condition is
    that the data is a contracted complex modulo 2.
    """
    if k < 1:
        raise ConfigError(f"Truncation exponent must be positive, got {k}")
    if c.contraction is None:
        raise NotContractedError("Repair needs a candidate contraction")
    base = c.reduced(2)
    base = ChainData(
        groups=base.groups, maps=base.maps, variant=base.variant, contraction=base.contraction,
        filtration=Filtration.trivial(base.ranks), modulus=2, locale=base.locale, label=base.label,
    )
    problems = _filtration_defects(base, base.filtration)  # type: ignore[arg-type]
    if problems:
        raise NotContractedError(f"Not contracted modulo 2: {'; '.join(problems[:5])}")
    truncated = c.reduced(2 ** k)
    truncated = ChainData(
        groups=truncated.groups, maps=truncated.maps, variant=truncated.variant,
        contraction=truncated.contraction, filtration=Filtration.power_of_two(k),
        modulus=2 ** k, locale=2, label=truncated.label,
    )
    return _repair(truncated, k)


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------


def _random_unimodular(rng: np.random.Generator, n: int) -> tuple[IntMatrix, IntMatrix]:
    """(Q, Q^-1) from random elementary row operations."""
    q, q_inv = identity(n), identity(n)
    if n < 2:
        return q, q_inv
    for _ in range(3 * n):
        i, j = (int(v) for v in rng.choice(n, size=2, replace=False))
        c = int(rng.integers(-2, 3))
        q[i] = q[i] + c * q[j]
        q_inv[:, j] = q_inv[:, j] - c * q_inv[:, i]
    return q, q_inv


def random_pseudo_complex(
    seed: int = 0, top_degree: int = 3, depth: int = 3, max_rank: int = 8
) -> ChainData:
    """A filtered pre-complex with contracted associated graded.

    Built from elementary pieces Z -> Z (d = 1, s = 1) placed at random
    filtration levels, conjugated by level-preserving unimodular changes of
    basis and perturbed by random maps from lower to strictly higher levels.
    """
    rng = np.random.default_rng(seed)
    slots: list[list[tuple[int, int, str]]] = [[] for _ in range(top_degree + 1)]
    pieces = []
    for i in range(depth):
        for r in range(top_degree):
            if rng.random() >= 0.6:
                continue
            if len(slots[r]) >= max_rank or len(slots[r + 1]) >= max_rank:
                continue
            k = len(pieces)
            pieces.append((r, i))
            slots[r].append((i, k, "bottom"))
            slots[r + 1].append((i, k, "top"))
    if not pieces and top_degree:
        pieces.append((0, 0))
        slots[0].append((0, 0, "bottom"))
        slots[1].append((0, 0, "top"))
    for per_degree in slots:
        per_degree.sort()
    position = [{(k, role): x for x, (_, k, role) in enumerate(per_degree)} for per_degree in slots]
    level_of = [[i for i, _, _ in per_degree] for per_degree in slots]
    n = [len(per_degree) for per_degree in slots]

    d = {r: zeros(n[r - 1], n[r]) for r in range(1, top_degree + 1)}
    s = {r: zeros(n[r + 1], n[r]) for r in range(top_degree)}
    for k, (r, _) in enumerate(pieces):
        a, b = position[r + 1][(k, "top")], position[r][(k, "bottom")]
        d[r + 1][b, a] = 1
        s[r][a, b] = 1

    changes = []
    for r in range(top_degree + 1):
        blocks = [
            _random_unimodular(rng, sum(1 for v in level_of[r] if v == i)) for i in range(depth)
        ]
        changes.append((
            block_diagonal([q for q, _ in blocks]),
            block_diagonal([q_inv for _, q_inv in blocks]),
        ))

    def perturb(m: IntMatrix, target: int, source: int) -> IntMatrix:
        out = m.copy()
        for x in range(m.shape[0]):
            for y in range(m.shape[1]):
                if level_of[target][x] > level_of[source][y] and rng.random() < 0.5:
                    out[x, y] += int(rng.integers(-2, 3))
        return out

    for r in range(1, top_degree + 1):
        d[r] = perturb(mat_mul(changes[r - 1][0], d[r], changes[r][1]), r - 1, r)
    for r in range(top_degree):
        s[r] = perturb(mat_mul(changes[r + 1][0], s[r], changes[r][1]), r + 1, r)
    return ChainData(
        groups=tuple(AbGroupPresentation.free(x) for x in n),
        maps=tuple(d[r] for r in range(1, top_degree + 1)),
        contraction=tuple(s[r] for r in range(top_degree)),
        filtration=Filtration.coordinate(level_of, depth),
        label=f"random(seed={seed})",
    )
