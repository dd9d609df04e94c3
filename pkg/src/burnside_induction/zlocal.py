"""Exact integer linear algebra over Z and Z_(p).

Matrices are numpy arrays of dtype=object holding Python ints, so entries
never overflow. Lattices are represented by a matrix whose columns form a
basis; `hermite_basis` puts such a basis into a canonical form so lattices
can be compared by array equality.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal

import numpy as np
from sympy import multiplicity, primefactors

from .exceptions import ShapeMismatchError

logger = logging.getLogger(__name__)

IntMatrix = np.ndarray
Locale = int | Literal["integral", "generic"]

INTEGRAL: Locale = "integral"
GENERIC: Locale = "generic"


# ---------------------------------------------------------------------------
# construction helpers
# ---------------------------------------------------------------------------


def zeros(rows: int, cols: int) -> IntMatrix:
    return np.zeros((rows, cols), dtype=object)


def identity(n: int) -> IntMatrix:
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def as_int_matrix(data: Any, rows: int | None = None, cols: int | None = None) -> IntMatrix:
    """Coerce nested sequences (or an array) into an object matrix of ints.

    `rows`/`cols` fix the shape of empty inputs, which numpy cannot infer.
    """
    if isinstance(data, np.ndarray) and data.ndim == 2:
        out = zeros(*data.shape)
        for idx, value in np.ndenumerate(data):
            out[idx] = int(value)
        return out
    data = [list(row) for row in data]
    n_rows = len(data) if rows is None else rows
    n_cols = (len(data[0]) if data else 0) if cols is None else cols
    out = zeros(n_rows, n_cols)
    for i, row in enumerate(data):
        if len(row) != n_cols:
            raise ShapeMismatchError(f"Row {i} has {len(row)} entries, expected {n_cols}")
        for j, value in enumerate(row):
            out[i, j] = int(value)
    return out


def column(values: Sequence[Any]) -> IntMatrix:
    out = np.zeros((len(values), 1), dtype=object)
    for i, value in enumerate(values):
        out[i, 0] = value
    return out


def mat_mul(*ms: np.ndarray) -> np.ndarray:
    """Product of a chain of object matrices, safe for empty inner dimensions."""
    result = ms[0]
    for m in ms[1:]:
        if result.shape[1] != m.shape[0]:
            raise ShapeMismatchError(f"Cannot multiply {result.shape} by {m.shape}")
        if result.shape[1] == 0:
            result = zeros(result.shape[0], m.shape[1])
        else:
            result = result @ m
    return result


def apply(m: np.ndarray, vector: Sequence[Any]) -> np.ndarray:
    """m·v for a flat vector, returned flat."""
    return mat_mul(m, column(list(vector)))[:, 0]


def hstack(blocks: Iterable[np.ndarray], rows: int) -> np.ndarray:
    parts = [b for b in blocks if b.shape[1] > 0]
    for b in parts:
        if b.shape[0] != rows:
            raise ShapeMismatchError(f"Block with {b.shape[0]} rows, expected {rows}")
    if not parts:
        return zeros(rows, 0)
    return np.concatenate(parts, axis=1)


def vstack(blocks: Iterable[np.ndarray], cols: int) -> np.ndarray:
    parts = [b for b in blocks if b.shape[0] > 0]
    for b in parts:
        if b.shape[1] != cols:
            raise ShapeMismatchError(f"Block with {b.shape[1]} columns, expected {cols}")
    if not parts:
        return zeros(0, cols)
    return np.concatenate(parts, axis=0)


def block_diagonal(blocks: Sequence[np.ndarray]) -> IntMatrix:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def reduce_mod(m: np.ndarray, modulus: int) -> np.ndarray:
    """Entrywise reduction into [0, modulus); modulus 0 leaves m unchanged."""
    if modulus == 0:
        return m.copy()
    out = m.copy()
    for idx, value in np.ndenumerate(m):
        out[idx] = value % modulus
    return out


def is_zero(m: np.ndarray, modulus: int = 0) -> bool:
    if modulus == 0:
        return all(value == 0 for value in m.flat)
    return all(value % modulus == 0 for value in m.flat)


def equal(a: np.ndarray, b: np.ndarray, modulus: int = 0) -> bool:
    return a.shape == b.shape and is_zero(a - b, modulus)


def to_lists(m: np.ndarray) -> list[list[int]]:
    return [[int(v) for v in row] for row in m]


def fraction_mod(value: Fraction | int, modulus: int) -> int:
    """Image of a rational with denominator prime to modulus in Z/modulus."""
    value = Fraction(value)
    return value.numerator * pow(value.denominator, -1, modulus) % modulus


def is_p_unit(value: Fraction | int, p: int) -> bool:
    return Fraction(value).denominator % p != 0


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SmithForm:
    """U·m·V = D with U, V unimodular; the inverses are tracked alongside."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix
    rank: int

    @property
    def divisors(self) -> list[int]:
        return [int(self.D[i, i]) for i in range(self.rank)]


def _smallest_entry(a: IntMatrix, t: int) -> tuple[int, int] | None:
    best: tuple[int, int] | None = None
    best_value = 0
    rows, cols = a.shape
    for i in range(t, rows):
        for j in range(t, cols):
            value = abs(a[i, j])
            if value and (best is None or value < best_value):
                best, best_value = (i, j), value
    return best


def snf(m: IntMatrix) -> SmithForm:
    """Smith normal form with deterministic pivoting.

    The pivot is the entry of least absolute value in the remaining block,
    ties broken by row-major position. Diagonal entries come out
    non-negative with d_i | d_{i+1}.
    """
    a = as_int_matrix(m)
    rows, cols = a.shape
    u, u_inv = identity(rows), identity(rows)
    v, v_inv = identity(cols), identity(cols)

    def swap_rows(i: int, j: int) -> None:
        a[[i, j]] = a[[j, i]]
        u[[i, j]] = u[[j, i]]
        u_inv[:, [i, j]] = u_inv[:, [j, i]]

    def add_row(target: int, source: int, q: int) -> None:
        a[target] += q * a[source]
        u[target] += q * u[source]
        u_inv[:, source] -= q * u_inv[:, target]

    def swap_cols(i: int, j: int) -> None:
        a[:, [i, j]] = a[:, [j, i]]
        v[:, [i, j]] = v[:, [j, i]]
        v_inv[[i, j]] = v_inv[[j, i]]

    def add_col(target: int, source: int, q: int) -> None:
        a[:, target] += q * a[:, source]
        v[:, target] += q * v[:, source]
        v_inv[source] -= q * v_inv[target]

    t = 0
    while t < min(rows, cols):
        pivot = _smallest_entry(a, t)
        if pivot is None:
            break
        while True:
            assert pivot is not None
            i, j = pivot
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = a[t, t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i, t] != 0:
                    add_row(i, t, -(a[i, t] // p))
                    dirty = dirty or a[i, t] != 0
            for j in range(t + 1, cols):
                if a[t, j] != 0:
                    add_col(j, t, -(a[t, j] // p))
                    dirty = dirty or a[t, j] != 0
            if not dirty:
                offender = next(
                    (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i, j] % p != 0),
                    None,
                )
                if offender is None:
                    break
                add_row(t, offender, 1)
            pivot = _smallest_entry(a, t)
        if a[t, t] < 0:
            a[t] = -a[t]
            u[t] = -u[t]
            u_inv[:, t] = -u_inv[:, t]
        t += 1

    return SmithForm(U=u, D=a, V=v, U_inv=u_inv, V_inv=v_inv, rank=t)


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------


def _row_hermite(a: IntMatrix) -> IntMatrix:
    a = a.copy()
    k, n = a.shape
    r = 0
    for col in range(n):
        if r == k:
            break
        while True:
            nonzero = [i for i in range(r, k) if a[i, col] != 0]
            if not nonzero:
                break
            piv = min(nonzero, key=lambda i: (abs(a[i, col]), i))
            if piv != r:
                a[[r, piv]] = a[[piv, r]]
            for i in range(r + 1, k):
                if a[i, col] != 0:
                    a[i] -= (a[i, col] // a[r, col]) * a[r]
            if all(a[i, col] == 0 for i in range(r + 1, k)):
                break
        if a[r, col] == 0:
            continue
        if a[r, col] < 0:
            a[r] = -a[r]
        for i in range(r):
            a[i] -= (a[i, col] // a[r, col]) * a[r]
        r += 1
    return a[:r].copy()


def hermite_basis(generators: IntMatrix) -> IntMatrix:
    """Canonical basis (as columns) of the lattice spanned by the columns."""
    n = generators.shape[0]
    if generators.shape[1] == 0:
        return zeros(n, 0)
    rows = _row_hermite(as_int_matrix(generators).T)
    return rows.T.copy() if rows.shape[0] else zeros(n, 0)


def kernel(m: IntMatrix) -> IntMatrix:
    """Basis (columns) of {x : m·x = 0}."""
    form = snf(m)
    return hermite_basis(form.V[:, form.rank:])


def image(m: IntMatrix) -> IntMatrix:
    return hermite_basis(m)


def lattice_sum(*lattices: IntMatrix) -> IntMatrix:
    rows = lattices[0].shape[0]
    return hermite_basis(hstack(lattices, rows))


def lattice_intersection(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    rows = a.shape[0]
    if a.shape[1] == 0 or b.shape[1] == 0:
        return zeros(rows, 0)
    null = kernel(hstack([a, -b], rows))
    return hermite_basis(mat_mul(a, null[: a.shape[1]]))


def lattice_contains(lattice: IntMatrix, vector: IntMatrix, modulus: int = 0) -> bool:
    """Membership of a column (or every column of a matrix) in lattice + modulus·Z^n."""
    rows = lattice.shape[0]
    if rows == 0:
        return True
    gens = lattice if modulus == 0 else hstack([lattice, modulus * identity(rows)], rows)
    vector = vector.reshape(rows, -1)
    return all(solve_integral(gens, vector[:, j]) is not None for j in range(vector.shape[1]))


def lattices_equal(a: IntMatrix, b: IntMatrix) -> bool:
    ha, hb = hermite_basis(a), hermite_basis(b)
    return ha.shape == hb.shape and equal(ha, hb)


def congruence_kernel(system: IntMatrix, moduli: Sequence[int]) -> IntMatrix:
    """Basis of {x : (system·x)_i ≡ 0 mod moduli[i]}; modulus 0 means equality."""
    rows, n = system.shape
    if len(moduli) != rows:
        raise ShapeMismatchError(f"{len(moduli)} moduli for {rows} equations")
    keep = [i for i in range(rows) if moduli[i] != 1]
    system = system[keep]
    moduli = [moduli[i] for i in keep]
    if not keep:
        return identity(n)
    slack = [i for i, q in enumerate(moduli) if q != 0]
    extra = zeros(len(keep), len(slack))
    for col, i in enumerate(slack):
        extra[i, col] = -moduli[i]
    null = kernel(hstack([system, extra], len(keep)))
    return hermite_basis(null[:n])


def coordinates(basis: IntMatrix, vectors: IntMatrix) -> IntMatrix:
    """Integral coordinates of each column of `vectors` in a lattice basis."""
    out = zeros(basis.shape[1], vectors.shape[1])
    for j in range(vectors.shape[1]):
        x = solve_integral(basis, vectors[:, j])
        if x is None:
            raise ShapeMismatchError(f"Column {j} does not lie in the lattice")
        out[:, j] = x
    return out


# ---------------------------------------------------------------------------
# cokernels and localized surjectivity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CokernelInvariants:
    """Z^rows / image as free rank plus torsion invariant factors (all > 1)."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def primes(self) -> tuple[int, ...]:
        found: set[int] = set()
        for d in self.torsion:
            found.update(primefactors(d))
        return tuple(sorted(found))

    def localized(self, p: int) -> "CokernelInvariants":
        """Invariants after tensoring with Z_(p)."""
        torsion = tuple(p ** multiplicity(p, d) for d in self.torsion if d % p == 0)
        return CokernelInvariants(self.free_rank, torsion)

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict[str, Any]:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": self.describe()}


def cokernel_invariants(m: IntMatrix) -> CokernelInvariants:
    form = snf(m)
    return CokernelInvariants(
        free_rank=m.shape[0] - form.rank,
        torsion=tuple(d for d in form.divisors if d > 1),
    )


@dataclass(frozen=True)
class SurjectivityVerdict:
    surjective: bool
    locale: Locale
    invariants: CokernelInvariants

    def to_dict(self) -> dict[str, Any]:
        return {
            "locale": self.locale,
            "surjective": self.surjective,
            "cokernel": self.invariants.to_dict(),
            "cokernel_primes": list(self.invariants.primes),
        }


def is_surjective_localized(m: IntMatrix, locale: Locale = INTEGRAL) -> SurjectivityVerdict:
    """Surjectivity of m: Z^cols -> Z^rows, integrally, at a prime, or generically.

    The generic verdict only asks for a finite cokernel; its prime divisors
    are reported for the caller to compare against a group order.
    """
    inv = cokernel_invariants(m)
    if locale == INTEGRAL:
        ok = inv.is_zero
    elif locale == GENERIC:
        ok = inv.free_rank == 0
    else:
        ok = inv.free_rank == 0 and all(d % int(locale) != 0 for d in inv.torsion)
    return SurjectivityVerdict(ok, locale, inv)


# ---------------------------------------------------------------------------
# solving
# ---------------------------------------------------------------------------


def _as_vector(b: Any, n: int) -> np.ndarray:
    vec = np.zeros(n, dtype=object)
    flat = list(np.asarray(b, dtype=object).flat)
    if len(flat) != n:
        raise ShapeMismatchError(f"Right-hand side has {len(flat)} entries, expected {n}")
    for i, value in enumerate(flat):
        vec[i] = value
    return vec


def solve_integral(m: IntMatrix, b: Any) -> np.ndarray | None:
    """An integral x with m·x = b, or None."""
    rows, cols = m.shape
    rhs = _as_vector(b, rows)
    form = snf(m)
    c = form.U.dot(rhs) if rows else rhs
    y = np.zeros(cols, dtype=object)
    for i in range(rows):
        if i < form.rank:
            d = form.D[i, i]
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
        elif c[i] != 0:
            return None
    return form.V.dot(y) if cols else y


@dataclass(frozen=True, eq=False)
class LocalSolution:
    """Result of a Z_(p) solve.

    When infeasible, `certificate` holds a functional λ (a row of U) with
    λ·m ≡ 0 modulo `modulus` (0 meaning exactly) while λ·b is not.
    """

    feasible: bool
    prime: int
    x: list[Fraction] = field(default_factory=list)
    certificate: dict[str, Any] = field(default_factory=dict)


def solve_localized(m: IntMatrix, b: Any, p: int) -> LocalSolution:
    """Solve m·x = b with x having denominators prime to p."""
    rows, cols = m.shape
    rhs = _as_vector(b, rows)
    form = snf(m)
    c = form.U.dot(rhs) if rows else rhs
    y = [Fraction(0)] * cols
    for i in range(rows):
        functional = [int(v) for v in form.U[i]]
        if i < form.rank:
            d = int(form.D[i, i])
            p_power = p ** multiplicity(p, d)
            if c[i] % p_power != 0:
                logger.debug(f"p-local solve blocked at divisor {d} (residue {c[i]})")
                return LocalSolution(False, p, certificate={
                    "functional": functional, "modulus": p_power,
                    "value": int(c[i]), "divisor": d,
                })
            y[i] = Fraction(int(c[i]), d)
        elif c[i] != 0:
            return LocalSolution(False, p, certificate={
                "functional": functional, "modulus": 0, "value": int(c[i]), "divisor": 0,
            })
    x = [sum((form.V[r, k] * y[k] for k in range(cols)), Fraction(0)) for r in range(cols)]
    return LocalSolution(True, p, x=x)
