"""Quaternion scalars, imaginary units and slice-plane embeddings.

Quaternions are kept as plain float 4-tuples (w, x, y, z) wrapped in a small
immutable class.  The unit sphere of imaginary units (pure quaternions with
q*q = -1) gets its own constructor so invalid units are rejected early; each
unit I spans the complex slice {x + y*I}.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import ZeroDivisor

#: default tolerance for "is effectively zero / unit" decisions
TOL = 1e-12

#: unit inputs are renormalised when within this distance of unit norm
UNIT_TOL = 1e-9


class Quaternion:
    """Element of the quaternion algebra H with components w + x*i + y*j + z*k."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w: float = 0.0, x: float = 0.0, y: float = 0.0, z: float = 0.0):
        self.w = float(w)
        self.x = float(x)
        self.y = float(y)
        self.z = float(z)

    # -- algebra ----------------------------------------------------------

    def __add__(self, other) -> "Quaternion":
        other = as_quaternion(other)
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other) -> "Quaternion":
        other = as_quaternion(other)
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __rsub__(self, other) -> "Quaternion":
        return as_quaternion(other) - self

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other) -> "Quaternion":
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return hamilton_product(self, as_quaternion(other))

    def __rmul__(self, other) -> "Quaternion":
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return hamilton_product(as_quaternion(other), self)

    def __truediv__(self, other) -> "Quaternion":
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return self * quat_inverse(as_quaternion(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Quaternion, int, float)):
            return NotImplemented
        other = as_quaternion(other)
        return (self.w, self.x, self.y, self.z) == (other.w, other.x, other.y, other.z)

    def __hash__(self):
        return hash((self.w, self.x, self.y, self.z))

    def __repr__(self) -> str:
        return f"Quaternion({self.w:g}, {self.x:g}, {self.y:g}, {self.z:g})"

    # -- structure --------------------------------------------------------

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def real(self) -> float:
        return self.w

    def imag_norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def inverse(self) -> "Quaternion":
        return quat_inverse(self)

    def isclose(self, other, tol: float = TOL) -> bool:
        return (self - as_quaternion(other)).norm() <= tol

    # -- serialization ----------------------------------------------------

    def to_list(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    @classmethod
    def from_list(cls, data: Sequence[float]) -> "Quaternion":
        if len(data) != 4:
            raise ValueError(f"quaternion JSON must be a 4-array, got {len(data)} entries")
        return cls(*data)


class ImaginaryUnit(Quaternion):
    """Point of the unit 2-sphere {q : q*q = -1}, i.e. a pure unit quaternion.

    Inputs within UNIT_TOL of unit length are renormalised; anything further
    off is rejected rather than silently scaled.
    """

    __slots__ = ()

    def __init__(self, x: float, y: float, z: float):
        n = math.sqrt(x * x + y * y + z * z)
        if abs(n - 1.0) > UNIT_TOL:
            raise ValueError(f"imaginary unit must have norm 1 (got {n!r})")
        super().__init__(0.0, x / n, y / n, z / n)

    def __repr__(self) -> str:
        return f"ImaginaryUnit({self.x:g}, {self.y:g}, {self.z:g})"

    def to_list(self) -> list[float]:
        return [self.x, self.y, self.z]

    @classmethod
    def from_list(cls, data: Sequence[float]) -> "ImaginaryUnit":
        if len(data) != 3:
            raise ValueError(f"imaginary unit JSON must be a 3-array, got {len(data)} entries")
        return cls(*data)

    @classmethod
    def from_quaternion(cls, q: Quaternion, tol: float = UNIT_TOL) -> "ImaginaryUnit":
        if abs(q.w) > tol:
            raise ValueError(f"quaternion {q!r} has a real part; not an imaginary unit")
        return cls(q.x, q.y, q.z)


ONE = Quaternion(1.0)
ZERO = Quaternion(0.0)
I = ImaginaryUnit(1.0, 0.0, 0.0)
J = ImaginaryUnit(0.0, 1.0, 0.0)
K = ImaginaryUnit(0.0, 0.0, 1.0)


def as_quaternion(value) -> Quaternion:
    """Coerce reals and 4-sequences to Quaternion; pass quaternions through."""
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(value)
    if isinstance(value, complex):
        raise TypeError("complex numbers embed via embed_slice(z, I), not implicitly")
    return Quaternion.from_list(list(value))


def hamilton_product(a: Quaternion, b: Quaternion) -> Quaternion:
    """Noncommutative product of H; associative and bilinear over the reals."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def quat_inverse(q: Quaternion, tol: float = TOL) -> Quaternion:
    """Two-sided inverse conj(q)/|q|^2.

    Raises ZeroDivisor when |q| <= tol.
    """
    n2 = q.norm2()
    if math.sqrt(n2) <= tol:
        raise ZeroDivisor(f"cannot invert quaternion with norm {math.sqrt(n2):g}")
    return Quaternion(q.w / n2, -q.x / n2, -q.y / n2, -q.z / n2)


def embed_slice(z: complex, unit: Quaternion) -> Quaternion:
    """Embed x + y*i of C into the slice plane through `unit`: x + y*unit."""
    z = complex(z)
    return Quaternion(
        z.real + z.imag * unit.w,
        z.imag * unit.x,
        z.imag * unit.y,
        z.imag * unit.z,
    )


def is_imaginary_unit(q: Quaternion, tol: float) -> bool:
    """True iff |Re q| <= tol and ||q| - 1| <= tol."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return abs(q.w) <= tol and abs(q.norm() - 1.0) <= tol


def unit_exp(theta: float, unit: Quaternion) -> Quaternion:
    """exp(theta * unit) = cos(theta) + sin(theta) * unit for a unit imaginary."""
    c, s = math.cos(theta), math.sin(theta)
    return Quaternion(c, s * unit.x, s * unit.y, s * unit.z)


def random_imaginary_unit(rng: np.random.Generator) -> ImaginaryUnit:
    """Uniform sample of the unit 2-sphere via a normalised Gaussian triple."""
    while True:
        v = rng.standard_normal(3)
        n = float(np.linalg.norm(v))
        if n > 1e-6:
            return ImaginaryUnit(v[0] / n, v[1] / n, v[2] / n)


def orthogonal_unit_pair(rng: np.random.Generator) -> tuple[ImaginaryUnit, ImaginaryUnit]:
    """Two perpendicular imaginary units, uniformly distributed."""
    u = random_imaginary_unit(rng)
    while True:
        v = rng.standard_normal(3)
        v -= np.dot(v, [u.x, u.y, u.z]) * np.array([u.x, u.y, u.z])
        n = float(np.linalg.norm(v))
        if n > 1e-6:
            return u, ImaginaryUnit(v[0] / n, v[1] / n, v[2] / n)


def max_component_distance(a: Iterable[Quaternion], b: Iterable[Quaternion]) -> float:
    """Max norm of entrywise differences of two quaternion sequences."""
    return max((x - y).norm() for x, y in zip(a, b, strict=True))
