"""Combinatorial matrix constructions over the sphere of imaginary units.

A slice-unit matrix J assigns one imaginary unit to each of 2**N rows and N
columns.  Each row expands through the unit-product map into a row of 2**N
quaternions, and stacking those rows yields the square matrix whose
invertibility governs the representation formula.  The mirrored +-I stack
eta_N(I) is the canonical choice: scaled by 2**(-N/2) it is unitary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange, NotIndependent, ShapeMismatch
from .qmat import QuaternionMatrix, qmat_rank
from .quat import ImaginaryUnit, Quaternion, random_imaginary_unit
from .stemtensor import apply_real_matrix, sigma_matrix


def unit_product(units: Sequence[Quaternion], m: int) -> Quaternion:
    """Product prod_{l=N..1} (I_l * I_{l-1})**m_l with I_0 = 1.

    The exponents (m_N ... m_1)_2 are the binary digits of m - 1, so m = 1
    always yields 1 and m = 2**N pairs every neighbouring factor.
    """
    n = len(units)
    if not 1 <= m <= 1 << n:
        raise IndexOutOfRange(f"index {m} outside 1..{1 << n}")
    bits = m - 1
    out = Quaternion(1.0)
    for l in range(n, 0, -1):
        if (bits >> (l - 1)) & 1:
            lower = units[l - 2] if l >= 2 else Quaternion(1.0)
            out = out * (units[l - 1] * lower)
    return out


def zeta(units: Sequence[Quaternion]) -> tuple[Quaternion, ...]:
    """Row vector (P(1), P(2), ..., P(2**N)) of all unit products."""
    n = len(units)
    if n < 1:
        raise ShapeMismatch("zeta needs at least one unit")
    return tuple(unit_product(units, m) for m in range(1, (1 << n) + 1))


@dataclass(frozen=True)
class SliceUnitMatrix:
    """2**N x N grid of imaginary units with row and truncation access."""

    N: int
    entries: tuple[tuple[Quaternion, ...], ...]

    def __post_init__(self):
        if len(self.entries) != 1 << self.N or any(len(r) != self.N for r in self.entries):
            raise ShapeMismatch(f"slice-unit matrix of order {self.N} must be {1 << self.N}x{self.N}")

    def row(self, i: int) -> tuple[Quaternion, ...]:
        """Row i in 1-based indexing, a tuple of N units."""
        return self.entries[i - 1]

    @property
    def rows(self) -> tuple[tuple[Quaternion, ...], ...]:
        return self.entries

    def truncation(self, l: int) -> "SliceUnitMatrix":
        """First 2**l rows and first l columns."""
        if not 1 <= l <= self.N:
            raise IndexOutOfRange(f"truncation level {l} outside 1..{self.N}")
        return SliceUnitMatrix(l, tuple(r[:l] for r in self.entries[: 1 << l]))

    def permute_rows(self, perm: Sequence[int]) -> "SliceUnitMatrix":
        """Reorder rows by a permutation of 1..2**N (new row i = old row perm[i-1])."""
        if sorted(perm) != list(range(1, (1 << self.N) + 1)):
            raise ShapeMismatch("not a permutation of 1..2**N")
        return SliceUnitMatrix(self.N, tuple(self.entries[p - 1] for p in perm))

    def last_column(self) -> tuple[Quaternion, ...]:
        return tuple(r[-1] for r in self.entries)

    def to_json(self) -> str:
        rows = [[[u.x, u.y, u.z] for u in row] for row in self.entries]
        return json.dumps({"N": self.N, "rows": rows})

    @classmethod
    def from_json(cls, text: str) -> "SliceUnitMatrix":
        data = json.loads(text)
        rows = tuple(tuple(ImaginaryUnit.from_list(u) for u in row) for row in data["rows"])
        return cls(int(data["N"]), rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Quaternion]]) -> "SliceUnitMatrix":
        n = len(rows[0])
        return cls(n, tuple(tuple(r) for r in rows))


def eta_row(n: int, m: int, unit: Quaternion) -> tuple[Quaternion, ...]:
    """Signed constant row ((-1)**m_N * I, ..., (-1)**m_1 * I)."""
    if not 1 <= m <= 1 << n:
        raise IndexOutOfRange(f"row index {m} outside 1..{1 << n}")
    bits = m - 1
    return tuple(-unit if (bits >> (l - 1)) & 1 else unit for l in range(n, 0, -1))


def eta(n: int, unit: Quaternion) -> SliceUnitMatrix:
    """Stack of all 2**n signed rows built from a single unit."""
    if n < 1:
        raise ShapeMismatch("eta needs n >= 1")
    return SliceUnitMatrix(n, tuple(eta_row(n, m, unit) for m in range(1, (1 << n) + 1)))


def slice_matrix(j: SliceUnitMatrix) -> QuaternionMatrix:
    """Square matrix whose row i is zeta of row i of J."""
    return QuaternionMatrix.from_rows([list(zeta(row)) for row in j.entries])


def eta_inverse(j: SliceUnitMatrix) -> QuaternionMatrix:
    """Inverse of the slice matrix of an eta stack via its unitarity.

    2**(-N/2) * M is unitary, so M**-1 = 2**(-N) * conj(M)^T.  Only valid for
    matrices of eta shape; general inverses go through the complex adjoint.
    """
    m = slice_matrix(j)
    return m.conj_transpose().scale(2.0 ** (-j.N))


def is_left_slice_linearly_independent(j: SliceUnitMatrix) -> bool:
    """True iff the expanded zeta rows admit no nontrivial left combination."""
    return qmat_rank(slice_matrix(j)) == (1 << j.N)


def has_full_slice_rank(j: SliceUnitMatrix) -> bool:
    """True iff every truncation's slice matrix is invertible."""
    return all(
        qmat_rank(slice_matrix(j.truncation(l))) == (1 << l) for l in range(1, j.N + 1)
    )


def full_slice_rank_permutation(j: SliceUnitMatrix) -> tuple[int, ...]:
    """Row permutation making a left slice-linearly independent J full slice-rank.

    Mirrors the inductive argument: at level l the current front block of
    2**(l+1) rows has independent (l+1)-column zeta rows; among them 2**l rows
    with independent l-column zeta rows exist, and moving those to the front
    preserves every higher level.  Rows are scanned in ascending position and
    accepted when they raise the rank, so the output is deterministic.
    """
    if not is_left_slice_linearly_independent(j):
        raise NotIndependent("rows are left slice-linearly dependent; no permutation can help")
    order = list(range(1, (1 << j.N) + 1))
    for level in range(j.N - 1, 0, -1):
        candidates = order[: 1 << (level + 1)]
        selected: list[int] = []
        for row_idx in candidates:
            if len(selected) == 1 << level:
                break
            trial = selected + [row_idx]
            stacked = QuaternionMatrix.from_rows(
                [list(zeta(j.row(r)[:level])) for r in trial]
            )
            if qmat_rank(stacked) == len(trial):
                selected.append(row_idx)
        if len(selected) != 1 << level:  # cannot happen for independent input
            raise NotIndependent(f"could not select {1 << level} independent rows at level {level}")
        rest = [r for r in candidates if r not in selected]
        order = selected + rest + order[1 << (level + 1) :]
    return tuple(order)


@dataclass(frozen=True)
class StemStructureMatrix:
    """Real square matrix coupling stem components like multiplication by i.

    Defined operationally by its action on the tensor basis; entries are
    exactly 0 or +-1 and the square is minus the identity.
    """

    N: int
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=np.int64))
        size = 1 << self.N
        if self.matrix.shape != (size, size):
            raise ShapeMismatch(f"structure matrix of order {self.N} must be {size}x{size}")

    def apply(self, column: Sequence[Quaternion]) -> tuple[Quaternion, ...]:
        return apply_real_matrix(self.matrix, column)

    def squares_to_minus_identity(self) -> bool:
        size = 1 << self.N
        return bool(np.array_equal(self.matrix @ self.matrix, -np.eye(size, dtype=np.int64)))


def stem_structure_sigma(n: int) -> StemStructureMatrix:
    """Structure matrix obtained by expanding slot-N multiplication in the basis."""
    if n < 1:
        raise ShapeMismatch("structure matrix needs n >= 1")
    return StemStructureMatrix(n, sigma_matrix(n))


def slice_diag(j: SliceUnitMatrix) -> QuaternionMatrix:
    """Diagonal of last-column units; intertwines the slice matrix and sigma.

    For J = eta_N(I) (and in fact for any J):  diag * M(J) = M(J) * sigma_N,
    because multiplying a zeta row on the left by its last unit permutes the
    unit products exactly as sigma permutes the basis.
    """
    return QuaternionMatrix.diagonal(list(j.last_column()))


def random_slice_unit_matrix(
    n: int, rng: np.random.Generator, require_independent: bool = True, max_tries: int = 64
) -> SliceUnitMatrix:
    """Random unit grid, redrawn until left slice-linearly independent."""
    for _ in range(max_tries):
        rows = tuple(
            tuple(random_imaginary_unit(rng) for _ in range(n)) for _ in range(1 << n)
        )
        candidate = SliceUnitMatrix(n, rows)
        if not require_independent or is_left_slice_linearly_independent(candidate):
            return candidate
    raise NotIndependent(f"no independent sample found in {max_tries} draws")
