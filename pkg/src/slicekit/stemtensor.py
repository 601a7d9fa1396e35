"""Stem columns, the tensor algebra C^(x)N (x) H, and the star product.

A stem value is a column of 2**N quaternions.  Mapped through the basis
isomorphism it becomes an element of the tensor algebra, where the N complex
slots commute with everything and the single H slot keeps quaternion order.
Multiplication therefore reduces to structure constants on the basis

    b(m) = prod_{l=N..1} (i_l * i_{l-1})**m_l,   (m_N ... m_1)_2 = m - 1,

with i_l the slot-l imaginary and i_0 = 1.  Expanding the product, b(m)
carries an i in slot l exactly when bits l and l+1 of m-1 differ, and a sign
(-1)**(number of adjacent 1-1 bit pairs).  Multiplying two basis elements
XORs the bit patterns; the resulting sign law is validated against an
independent Kronecker matrix representation (see `oracle_star`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange, ShapeMismatch
from .quat import Quaternion, as_quaternion


def _bit(value: int, position: int) -> int:
    """Bit `position` (1-based from the least significant) of `value`."""
    return (value >> (position - 1)) & 1


@lru_cache(maxsize=None)
def _slot_pattern(n: int, m: int) -> int:
    """Bitmask of slots carrying an i in basis element m (1..2**n)."""
    if not 1 <= m <= 1 << n:
        raise IndexOutOfRange(f"basis index {m} outside 1..{1 << n}")
    bits = m - 1
    pattern = 0
    for slot in range(1, n + 1):
        if _bit(bits, slot) ^ _bit(bits, slot + 1):
            pattern |= 1 << (slot - 1)
    return pattern


@lru_cache(maxsize=None)
def _basis_sign(n: int, m: int) -> int:
    """Sign of basis element m relative to the bare slot pattern."""
    bits = m - 1
    pairs = sum(1 for slot in range(1, n) if _bit(bits, slot) and _bit(bits, slot + 1))
    return -1 if pairs % 2 else 1


def basis_product(n: int, a: int, b: int) -> tuple[int, int]:
    """Indices multiply by XOR of (index - 1); returns (c, sign).

    b(a) * b(b) = sign * b(c) with c - 1 = (a - 1) XOR (b - 1).  The sign
    collects each operand's pattern sign, the result's, and a -1 per slot
    where both operands carry an i (i * i = -1 slotwise).
    """
    c = ((a - 1) ^ (b - 1)) + 1
    overlap = _slot_pattern(n, a) & _slot_pattern(n, b)
    sign = _basis_sign(n, a) * _basis_sign(n, b) * _basis_sign(n, c)
    if bin(overlap).count("1") % 2:
        sign = -sign
    return c, sign


@dataclass(frozen=True)
class StemValue:
    """Column of 2**N quaternions, the value of a stem function at one point."""

    N: int
    entries: tuple[Quaternion, ...]

    def __post_init__(self):
        if len(self.entries) != 1 << self.N:
            raise ShapeMismatch(f"stem value of order {self.N} needs {1 << self.N} entries")
        object.__setattr__(self, "entries", tuple(as_quaternion(e) for e in self.entries))

    def __add__(self, other: "StemValue") -> "StemValue":
        if self.N != other.N:
            raise ShapeMismatch("stem values of different order")
        return StemValue(self.N, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "StemValue") -> "StemValue":
        if self.N != other.N:
            raise ShapeMismatch("stem values of different order")
        return StemValue(self.N, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def star(self, other: "StemValue") -> "StemValue":
        return star_vector(self, other)

    def max_norm(self) -> float:
        return max(e.norm() for e in self.entries)

    @classmethod
    def basis(cls, n: int, index: int) -> "StemValue":
        """Standard column e_{N,index} with a single 1."""
        if not 1 <= index <= 1 << n:
            raise IndexOutOfRange(f"basis index {index} outside 1..{1 << n}")
        return cls(n, tuple(Quaternion(1.0 if m == index else 0.0) for m in range(1, (1 << n) + 1)))

    @classmethod
    def padded(cls, lower: "StemValue") -> "StemValue":
        """(a^T, 0)^T: embed an order-N value in order N+1 by zero padding."""
        zeros = (Quaternion(),) * len(lower.entries)
        return cls(lower.N + 1, lower.entries + zeros)


@dataclass(frozen=True)
class TensorValue:
    """Element sum_m b(m) * q_m of the tensor algebra, stored by coefficients."""

    N: int
    coefficients: tuple[Quaternion, ...]

    def __post_init__(self):
        if len(self.coefficients) != 1 << self.N:
            raise ShapeMismatch(f"tensor value of order {self.N} needs {1 << self.N} coefficients")
        object.__setattr__(self, "coefficients", tuple(as_quaternion(c) for c in self.coefficients))

    def __add__(self, other: "TensorValue") -> "TensorValue":
        if self.N != other.N:
            raise ShapeMismatch("tensor values of different order")
        return TensorValue(self.N, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "TensorValue") -> "TensorValue":
        if self.N != other.N:
            raise ShapeMismatch("tensor values of different order")
        return TensorValue(self.N, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __mul__(self, other: "TensorValue") -> "TensorValue":
        return tensor_mul(self, other)

    def scale_left(self, q: Quaternion) -> "TensorValue":
        return TensorValue(self.N, tuple(q * c for c in self.coefficients))

    def scale_right(self, q: Quaternion) -> "TensorValue":
        return TensorValue(self.N, tuple(c * q for c in self.coefficients))

    def power(self, n: int) -> "TensorValue":
        out = tensor_one(self.N)
        for _ in range(n):
            out = tensor_mul(out, self)
        return out

    def max_norm(self) -> float:
        return max(c.norm() for c in self.coefficients)


def tensor_one(n: int) -> TensorValue:
    return tensor_from_vector(StemValue.basis(n, 1))


def slot_imaginary(n: int, slot: int) -> TensorValue:
    """The slot-`slot` imaginary as a tensor value, e.g. slot N for z**(N)."""
    if not 1 <= slot <= n:
        raise IndexOutOfRange(f"slot {slot} outside 1..{n}")
    coeffs = [Quaternion() for _ in range(1 << n)]
    # basis index whose pattern is exactly {slot}: bits l..N all set from l=slot upward
    for m in range(1, (1 << n) + 1):
        if _slot_pattern(n, m) == 1 << (slot - 1):
            coeffs[m - 1] = Quaternion(float(_basis_sign(n, m)))
            return TensorValue(n, tuple(coeffs))
    raise IndexOutOfRange(f"no basis element with bare slot {slot}")  # pragma: no cover


def tensor_from_vector(a: StemValue | Sequence[Quaternion]) -> TensorValue:
    """Basis isomorphism: column entry m becomes the coefficient of b(m)."""
    if not isinstance(a, StemValue):
        entries = tuple(as_quaternion(e) for e in a)
        n = (len(entries) - 1).bit_length()
        a = StemValue(n, entries)
    return TensorValue(a.N, a.entries)


def vector_from_tensor(t: TensorValue) -> StemValue:
    return StemValue(t.N, t.coefficients)


def tensor_mul(a: TensorValue, b: TensorValue) -> TensorValue:
    """Bilinear extension of the basis law; H coefficients keep order a, b."""
    if a.N != b.N:
        raise ShapeMismatch("tensor values of different order")
    out = [Quaternion() for _ in range(1 << a.N)]
    for ma, ca in enumerate(a.coefficients, start=1):
        if ca.norm2() == 0.0:
            continue
        for mb, cb in enumerate(b.coefficients, start=1):
            if cb.norm2() == 0.0:
                continue
            c, sign = basis_product(a.N, ma, mb)
            term = ca * cb
            out[c - 1] = out[c - 1] + (term if sign > 0 else -term)
    return TensorValue(a.N, tuple(out))


def star_vector(a: StemValue, b: StemValue) -> StemValue:
    """Star product of stem columns, pulled through the tensor algebra."""
    if a.N != b.N:
        raise ShapeMismatch("stem values of different order")
    return vector_from_tensor(tensor_mul(tensor_from_vector(a), tensor_from_vector(b)))


@lru_cache(maxsize=None)
def sigma_matrix(n: int) -> np.ndarray:
    """Real 2**n square matrix with slot-N imaginary action on the basis.

    Column m holds the expansion of i_{slot N} * b(m); entries are exactly
    0 or +-1, one nonzero per row and column, and the square is -identity.
    """
    size = 1 << n
    sigma = np.zeros((size, size), dtype=np.int64)
    top_sign = _basis_sign(n, size)  # i_{slot N} = top_sign * b(2**n)
    for m in range(1, size + 1):
        c, sign = basis_product(n, size, m)
        sigma[c - 1, m - 1] = top_sign * sign
    return sigma


def apply_real_matrix(mat: np.ndarray, column: Sequence[Quaternion]) -> tuple[Quaternion, ...]:
    """Real matrix acting on a quaternion column (reals commute with H)."""
    rows, cols = mat.shape
    if cols != len(column):
        raise ShapeMismatch(f"{rows}x{cols} matrix against column of length {len(column)}")
    comps = np.array([[q.w, q.x, q.y, q.z] for q in column], dtype=float)
    out = mat.astype(float) @ comps
    return tuple(Quaternion(*out[i]) for i in range(rows))


# -- independent Kronecker representation (oracle) --------------------------

_C_ONE = np.eye(2)
_C_I = np.array([[0.0, -1.0], [1.0, 0.0]])


def _left_mult_matrix(q: Quaternion) -> np.ndarray:
    """4x4 real matrix of p -> q*p in the basis (1, i, j, k)."""
    return np.array(
        [
            [q.w, -q.x, -q.y, -q.z],
            [q.x, q.w, -q.z, q.y],
            [q.y, q.z, q.w, -q.x],
            [q.z, -q.y, q.x, q.w],
        ]
    )


@lru_cache(maxsize=None)
def _pattern_matrix(n: int, m: int) -> np.ndarray:
    """Signed Kronecker product of the slot matrices of basis element m."""
    out = np.array([[float(_basis_sign(n, m))]])
    pattern = _slot_pattern(n, m)
    for slot in range(1, n + 1):
        out = np.kron(out, _C_I if pattern & (1 << (slot - 1)) else _C_ONE)
    return out


def kron_matrix(t: TensorValue) -> np.ndarray:
    """Faithful real-matrix image of a tensor value, size 4 * 2**N square."""
    size = (1 << t.N) * 4
    out = np.zeros((size, size))
    for m, coeff in enumerate(t.coefficients, start=1):
        if coeff.norm2() == 0.0:
            continue
        out += np.kron(_pattern_matrix(t.N, m), _left_mult_matrix(coeff))
    return out


@lru_cache(maxsize=None)
def _kron_basis(n: int) -> np.ndarray:
    """Flattened matrices of b(m) * e for e in (1, i, j, k), as columns."""
    units = [Quaternion(1, 0, 0, 0), Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)]
    columns = []
    for m in range(1, (1 << n) + 1):
        for e in units:
            columns.append(np.kron(_pattern_matrix(n, m), _left_mult_matrix(e)).ravel())
    return np.stack(columns, axis=1)


def tensor_from_kron(n: int, mat: np.ndarray) -> TensorValue:
    """Invert `kron_matrix` by least squares over the basis matrices."""
    sol, *_ = np.linalg.lstsq(_kron_basis(n), mat.ravel(), rcond=None)
    coeffs = [Quaternion(*sol[4 * m : 4 * m + 4]) for m in range(1 << n)]
    return TensorValue(n, tuple(coeffs))


def oracle_star(a: StemValue, b: StemValue) -> StemValue:
    """Star product computed entirely in the Kronecker representation.

    Independent of `basis_product`; used to cross-check the sign law.
    """
    if a.N != b.N:
        raise ShapeMismatch("stem values of different order")
    product = kron_matrix(tensor_from_vector(a)) @ kron_matrix(tensor_from_vector(b))
    return vector_from_tensor(tensor_from_kron(a.N, product))
