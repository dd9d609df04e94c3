"""The Burnside ideal I_M and the quotient Green ring A_M = A / I_M.

a in A(S) lies in I_M(S) when every induction of a to a transitive G-set,
and every restriction of a to one, acts as zero on M there. Because M is
additive, testing transitive G-sets only is enough.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from .burnside import action_matrix, burnside_ring
from .exceptions import NotMackeyError
from .groups import Group
from .gsets import GSet, all_gmaps
from .mackey import GreenRingData, MackeyData, burnside_functor
from .zlocal import (
    IntMatrix,
    congruence_kernel,
    identity,
    lattice_contains,
    lattice_sum,
    mat_mul,
    to_lists,
    vstack,
    zeros,
)

logger = logging.getLogger(__name__)


def _functor_of(m: MackeyData | GreenRingData) -> MackeyData:
    return m.base if isinstance(m, GreenRingData) else m


def _require_mackey(m: MackeyData) -> None:
    if not m.is_mackey:
        kinds = sorted(m.report.defect_kinds())
        raise NotMackeyError(
            f"'{m.name}' fails the Mackey axioms ({', '.join(kinds)}); I_M needs a genuine functor"
        )


@lru_cache(maxsize=None)
def _reduced_actions(m: MackeyData, class_index: int) -> tuple[IntMatrix, tuple[int, ...]]:
    """Flattened U·act(e_k) for the basis of A(G/H), one column per basis element.

    Row i*n + j of the result must vanish modulo the i-th elementary divisor
    of the value at H for the action to be zero there.
    """
    value = m.values[class_index]
    n = value.n_generators
    ring = burnside_ring(GSet.transitive(m.group, class_index))
    u, moduli = value.reduction
    out = zeros(n * n, ring.rank)
    for k in range(ring.rank):
        out[:, k] = mat_mul(u, action_matrix(ring.basis_element(k), m)).reshape(-1)
    return out, tuple(d for d in moduli for _ in range(n))


def ideal_I_M(m: MackeyData | GreenRingData, s: GSet) -> IntMatrix:
    """Basis (columns) of I_M(S) inside A(S).

    Args:
        m: A validated Mackey functor, or a Green ring (its underlying functor is used).
        s: The site.

    Returns:
        Hermite basis of the ideal in Burnside coordinates.

    Raises:
        NotMackeyError: If m fails any Mackey axiom.
    """
    functor = _functor_of(m)
    _require_mackey(functor)
    ring = burnside_ring(s)
    blocks: list[IntMatrix] = []
    moduli: list[int] = []
    for c in range(len(s.group.lattice)):
        if functor.values[c].n_generators == 0:
            continue
        t = GSet.transitive(s.group, c)
        actions, row_moduli = _reduced_actions(functor, c)
        t_ring = burnside_ring(t)
        transports = [ring.induction_matrix(phi) for phi in all_gmaps(s, t)]
        transports += [t_ring.restriction_matrix(psi) for psi in all_gmaps(t, s)]
        for transport in transports:
            blocks.append(mat_mul(actions, transport))
            moduli.extend(row_moduli)
    if not blocks:
        return identity(ring.rank)
    ideal = congruence_kernel(vstack(blocks, ring.rank), moduli)
    logger.debug(f"I_{functor.name}({s.describe()}): rank {ideal.shape[1]} of {ring.rank}")
    return ideal


def ideal_contains(outer: IntMatrix, inner: IntMatrix) -> bool:
    """Every column of `inner` lies in the lattice spanned by `outer`."""
    if inner.shape[1] == 0:
        return True
    return lattice_contains(outer, inner)


@dataclass(frozen=True, eq=False)
class BQGRData:
    """A_M on the transitive G-sets, with ideals at other sites on demand."""

    functor: MackeyData
    ideals: tuple[IntMatrix, ...]
    ring: GreenRingData
    _sites: dict[GSet, IntMatrix] = field(default_factory=dict, init=False, repr=False)

    @property
    def group(self) -> Group:
        return self.functor.group

    def ideal_at(self, s: GSet) -> IntMatrix:
        if len(s.instances) == 1:
            return self.ideals[s.instances[0]]
        if s not in self._sites:
            self._sites[s] = ideal_I_M(self.functor, s)
        return self._sites[s]

    def ideal_ranks(self) -> list[int]:
        return [ideal.shape[1] for ideal in self.ideals]

    def to_dict(self, site: GSet | None = None) -> dict[str, Any]:
        classes = self.group.lattice.classes
        top = len(classes) - 1
        point_ring = burnside_ring(GSet.point(self.group))
        data: dict[str, Any] = {
            "functor": self.functor.name,
            "classes": [
                {
                    "class": classes[c].label,
                    "burnside_rank": self.ring.base.values[c].n_generators,
                    "ideal_rank": ideal.shape[1],
                    "ideal_basis": to_lists(ideal.T),
                    "quotient": self.ring.base.values[c].invariants.to_dict(),
                }
                for c, ideal in enumerate(self.ideals)
            ],
            "point": {
                "basis": point_ring.labels(),
                "multiplication": [
                    [[int(v) for v in self.ring.mult[top][i, j]] for j in range(point_ring.rank)]
                    for i in range(point_ring.rank)
                ],
                "quotient": self.ring.base.values[top].invariants.to_dict(),
            },
        }
        if site is not None:
            ideal = self.ideal_at(site)
            data["site"] = {
                **site.to_dict(),
                "burnside_rank": burnside_ring(site).rank,
                "ideal_rank": ideal.shape[1],
                "ideal_basis": to_lists(ideal.T),
            }
        return data


def bqgr(m: MackeyData | GreenRingData) -> BQGRData:
    """The Burnside quotient Green ring of a validated Mackey functor."""
    functor = _functor_of(m)
    _require_mackey(functor)
    group = functor.group
    ideals = tuple(
        ideal_I_M(functor, GSet.transitive(group, c)) for c in range(len(group.lattice))
    )
    ring = burnside_functor(group).quotient(ideals, name=f"A_{functor.name}")
    logger.info(
        f"A_{functor.name} over {group.name}: ideal ranks {[i.shape[1] for i in ideals]}"
    )
    return BQGRData(functor, ideals, ring)


def unit_map(g: GreenRingData) -> tuple[IntMatrix, ...]:
    """Per class, the matrix of a -> a·1 from A(G/H) to the generators of G(G/H)."""
    out = []
    for c in range(len(g.group.lattice)):
        ring = burnside_ring(GSet.transitive(g.group, c))
        n = g.base.values[c].n_generators
        matrix = zeros(n, ring.rank)
        one = g.units[c].reshape(-1, 1)
        for k in range(ring.rank):
            matrix[:, k] = mat_mul(action_matrix(ring.basis_element(k), g.base), one)[:, 0]
        out.append(matrix)
    return tuple(out)


def image_of_unit_map(g: GreenRingData) -> GreenRingData:
    """The subring {a·1 : a in A} of g, in its own Hermite basis."""
    lattices = [
        lattice_sum(images, value.relations)
        if value.n_generators else zeros(0, 0)
        for images, value in zip(unit_map(g), g.base.values, strict=True)
    ]
    return g.sub(lattices, name=f"im({g.name})")
