"""Polynomial slice-regular calculus: star ring, conjugation, series.

Polynomials sum q**n * a_n with coefficients on the right; they are entire,
so every construction here lives on axially symmetric schlicht domains where
the star product is just coefficient convolution (the unique regular
extension of the pointwise product on the real axis).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import OutOfBall, SymmetrizationZero
from .monodromy import LogModel, PolynomialModel, SliceFunctionModel, SqrtModel
from .paths import NPartPath
from .quat import Quaternion, as_quaternion, embed_slice, quat_inverse
from .stemtensor import (
    apply_real_matrix,
    sigma_matrix,
    slot_imaginary,
    tensor_from_vector,
    tensor_mul,
    tensor_one,
    vector_from_tensor,
)
from .stems import stem_derivative_family


def _trim(coeffs: tuple[Quaternion, ...]) -> tuple[Quaternion, ...]:
    n = len(coeffs)
    while n > 1 and coeffs[n - 1].norm2() == 0.0:
        n -= 1
    return coeffs[:n]


@dataclass(frozen=True)
class SliceRegularPoly:
    """Entire slice regular polynomial q -> sum q**n * a_n."""

    coefficients: tuple[Quaternion, ...]

    def __post_init__(self):
        coeffs = tuple(as_quaternion(c) for c in self.coefficients) or (Quaternion(),)
        object.__setattr__(self, "coefficients", _trim(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, q) -> Quaternion:
        q = as_quaternion(q)
        acc = Quaternion()
        for a in reversed(self.coefficients):
            acc = q * acc + a
        return acc

    def __add__(self, other: "SliceRegularPoly") -> "SliceRegularPoly":
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        merged = list(a)
        for idx, coeff in enumerate(b):
            merged[idx] = merged[idx] + coeff
        return SliceRegularPoly(tuple(merged))

    def __sub__(self, other: "SliceRegularPoly") -> "SliceRegularPoly":
        return self + (-other)

    def __neg__(self) -> "SliceRegularPoly":
        return SliceRegularPoly(tuple(-c for c in self.coefficients))

    def __mul__(self, other: "SliceRegularPoly") -> "SliceRegularPoly":
        return star_product(self, other)

    def scale(self, factor: float) -> "SliceRegularPoly":
        return SliceRegularPoly(tuple(c * factor for c in self.coefficients))

    def star_power(self, n: int) -> "SliceRegularPoly":
        out = SliceRegularPoly((Quaternion(1.0),))
        for _ in range(n):
            out = star_product(out, self)
        return out

    def to_model(self) -> PolynomialModel:
        return PolynomialModel(self.coefficients)

    def to_json_obj(self) -> dict:
        return {"coeffs": [c.to_list() for c in self.coefficients]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SliceRegularPoly":
        return cls(tuple(Quaternion.from_list(c) for c in obj["coeffs"]))

    @classmethod
    def constant(cls, value) -> "SliceRegularPoly":
        return cls((as_quaternion(value),))

    @classmethod
    def identity(cls) -> "SliceRegularPoly":
        return cls((Quaternion(), Quaternion(1.0)))


ONE_POLY = SliceRegularPoly((Quaternion(1.0),))


def star_product(f: SliceRegularPoly, g: SliceRegularPoly) -> SliceRegularPoly:
    """Coefficient convolution c_n = sum_k a_k * b_(n-k), order preserved."""
    a, b = f.coefficients, g.coefficients
    out = [Quaternion() for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        if ai.norm2() == 0.0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return SliceRegularPoly(tuple(out))


def pointwise_star_check(f: SliceRegularPoly, g: SliceRegularPoly, q: Quaternion) -> float:
    """Deviation of the star product from f(q) * g(f(q)^-1 q f(q)).

    Raises ZeroDivisor when f(q) = 0 (the conjugated point is undefined).
    """
    fq = f(q)
    moved = quat_inverse(fq) * q * fq
    return (star_product(f, g)(q) - fq * g(moved)).norm()


def regular_conjugate(f: SliceRegularPoly) -> SliceRegularPoly:
    """Coefficientwise quaternion conjugation."""
    return SliceRegularPoly(tuple(c.conjugate() for c in f.coefficients))


def conjugate_via_components(f: SliceRegularPoly) -> SliceRegularPoly:
    """The conjugate built from star-sandwich component extraction.

    g4 = (f - i*f*i)/2 keeps the 1 and i parts, g0 = (g4 - j*g4*j)/2 keeps the
    real part, and the complementary sandwiches peel off the other three real
    component polynomials; reassembling with flipped signs must agree with
    coefficient conjugation.
    """
    i_c = SliceRegularPoly.constant(Quaternion(0, 1, 0, 0))
    j_c = SliceRegularPoly.constant(Quaternion(0, 0, 1, 0))
    k_c = SliceRegularPoly.constant(Quaternion(0, 0, 0, 1))

    def sandwich(u: SliceRegularPoly, c: SliceRegularPoly) -> SliceRegularPoly:
        return star_product(star_product(c, u), c)

    g4 = (f - sandwich(f, i_c)).scale(0.5)
    g0 = (g4 - sandwich(g4, j_c)).scale(0.5)
    g1 = star_product(g4 - g0, SliceRegularPoly.constant(Quaternion(0, -1, 0, 0)))
    h5 = (f + sandwich(f, i_c)).scale(0.5)
    g2_part = (h5 - sandwich(h5, j_c)).scale(0.5)
    g2 = star_product(g2_part, SliceRegularPoly.constant(Quaternion(0, 0, -1, 0)))
    g3_part = (h5 + sandwich(h5, j_c)).scale(0.5)
    g3 = star_product(g3_part, SliceRegularPoly.constant(Quaternion(0, 0, 0, -1)))
    return g0 - star_product(g1, i_c) - star_product(g2, j_c) - star_product(g3, k_c)


def symmetrization(f: SliceRegularPoly) -> SliceRegularPoly:
    """f * f^c; coefficients come out real."""
    return star_product(f, regular_conjugate(f))


def slice_derivative(f: SliceRegularPoly, n: int = 1) -> SliceRegularPoly:
    """n-th slice derivative: a_k -> (k+n)!/k! * a_(k+n)."""
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    coeffs = list(f.coefficients)
    for _ in range(n):
        coeffs = [coeffs[k] * float(k) for k in range(1, len(coeffs))]
        if not coeffs:
            return SliceRegularPoly((Quaternion(),))
    return SliceRegularPoly(tuple(coeffs))


def leibniz(f: SliceRegularPoly, g: SliceRegularPoly, n: int) -> SliceRegularPoly:
    """sum_m binom(n, m) f^(m) * g^(n-m); equals the derivative of f * g."""
    acc = SliceRegularPoly((Quaternion(),))
    for m in range(n + 1):
        term = star_product(slice_derivative(f, m), slice_derivative(g, n - m))
        acc = acc + term.scale(float(math.comb(n, m)))
    return acc


# -- axially symmetric domains and the reciprocal ---------------------------


@dataclass(frozen=True)
class AxSymDomain:
    """Axially symmetric arena: a real-centered ball, a sigma-ball, or H."""

    kind: str
    center: complex = 0j  # complex representative x + y*i, y >= 0
    radius: float = 0.0

    @classmethod
    def ball(cls, x0: float, radius: float) -> "AxSymDomain":
        return cls("ball", complex(x0, 0.0), radius)

    @classmethod
    def sigma_ball(cls, p: Quaternion, radius: float) -> "AxSymDomain":
        p = as_quaternion(p)
        return cls("sigma_ball", complex(p.w, p.imag_norm()), radius)

    @classmethod
    def whole(cls) -> "AxSymDomain":
        return cls("whole")

    def contains(self, q: Quaternion) -> bool:
        q = as_quaternion(q)
        z = complex(q.w, q.imag_norm())
        if self.kind == "whole":
            return True
        if self.kind == "ball":
            return abs(z - self.center) < self.radius
        return abs(z - self.center) < self.radius and abs(z.conjugate() - self.center) < self.radius

    def is_empty(self) -> bool:
        # a sigma-ball needs the conjugate pair of its center inside reach
        return self.kind == "sigma_ball" and self.center.imag >= self.radius

    def sample(self, rng: np.random.Generator, count: int) -> list[Quaternion]:
        if self.is_empty():
            raise ValueError(f"domain {self} is empty")
        out: list[Quaternion] = []
        rejections = 0
        while len(out) < count:
            if self.kind == "whole":
                v = rng.standard_normal(4)
                out.append(Quaternion(*v))
                continue
            z = self.center + self.radius * complex(*rng.uniform(-1, 1, 2))
            candidate_ok = abs(z - self.center) < self.radius and (
                self.kind == "ball" or abs(z.conjugate() - self.center) < self.radius
            )
            if not candidate_ok:
                rejections += 1
                if rejections > 10000 * (count + 1):
                    raise ValueError(f"sampling {self} keeps rejecting; domain nearly empty")
                continue
            axis = rng.standard_normal(3)
            axis /= np.linalg.norm(axis)
            y = abs(z.imag)
            out.append(Quaternion(z.real, y * axis[0], y * axis[1], y * axis[2]))
        return out


class StarReciprocal:
    """Evaluable regular reciprocal f^-* = (f^s)^-1 * f^c."""

    def __init__(self, f: SliceRegularPoly, domain: AxSymDomain):
        self.f = f
        self.conjugate = regular_conjugate(f)
        self.symm = symmetrization(f)
        self.domain = domain

    def __call__(self, q) -> Quaternion:
        q = as_quaternion(q)
        return quat_inverse(self.symm(q)) * self.conjugate(q)


def _symmetrization_roots(sym: SliceRegularPoly) -> list[complex]:
    reals = [c.w for c in sym.coefficients]
    if len(reals) <= 1:
        return []
    roots = np.roots(list(reversed(reals)))
    return [complex(r) for r in roots]


def _fibonacci_sphere(count: int) -> np.ndarray:
    golden = (1 + math.sqrt(5)) / 2
    idx = np.arange(count)
    z = 1 - 2 * (idx + 0.5) / count
    r = np.sqrt(1 - z * z)
    phi = 2 * math.pi * idx / golden
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def regular_reciprocal(
    f: SliceRegularPoly, domain: AxSymDomain, shells: int = 8, directions: int = 512
) -> StarReciprocal:
    """Inverse in the star ring, guarded against symmetrization zeros.

    The symmetrization has real coefficients, so its zero spheres come from
    the complex roots; any root inside the domain aborts.  A deterministic
    shell probe (Fibonacci directions on nested spheres) additionally guards
    the near-zero case |f^s| < 1e-9 on bounded domains.
    """
    sym = symmetrization(f)
    if max(c.norm() for c in sym.coefficients) < 1e-9:
        raise SymmetrizationZero("symmetrization is identically zero", witness=Quaternion())
    for root in _symmetrization_roots(sym):
        witness = Quaternion(root.real, abs(root.imag), 0.0, 0.0)
        if domain.contains(witness):
            raise SymmetrizationZero(f"symmetrization vanishes at {witness!r}", witness=witness)
    if domain.kind != "whole":
        center = Quaternion(domain.center.real)
        for shell in range(1, shells + 1):
            r = domain.radius * shell / shells * 0.999
            for d in _fibonacci_sphere(directions):
                q = center + Quaternion(0.0, *(r * d))
                if not domain.contains(q):
                    continue
                if sym(q).norm() < 1e-9:
                    raise SymmetrizationZero(f"symmetrization below 1e-9 at {q!r}", witness=q)
    return StarReciprocal(f, domain)


def star_eval(f_at: Callable, g_at: Callable, q: Quaternion) -> Quaternion:
    """Pointwise star product of two evaluable slice functions.

    Uses the conjugated-argument form f(q) * g(f(q)^-1 q f(q)); valid on
    schlicht axially symmetric domains, requires f(q) != 0.
    """
    q = as_quaternion(q)
    fq = f_at(q)
    return fq * g_at(quat_inverse(fq) * q * fq)


# -- Taylor series ------------------------------------------------------------


def _principal_derivative(model: SliceFunctionModel, z0: complex, n: int) -> complex:
    if isinstance(model, SqrtModel):
        coeff = 1.0
        for k in range(n):
            coeff *= 0.5 - k
        return coeff * z0 ** (0.5 - n)
    if isinstance(model, LogModel):
        if n == 0:
            return cmath.log(z0)
        return (-1.0) ** (n - 1) * math.factorial(n - 1) * z0 ** (-n)
    raise TypeError(f"no principal-branch derivatives for {model!r}")


def _slice_split(q: Quaternion) -> tuple[complex, Quaternion]:
    """Complex coordinate and slice unit of a quaternion (unit i for reals)."""
    y = q.imag_norm()
    if y < 1e-15:
        return complex(q.w, 0.0), Quaternion(0, 1, 0, 0)
    return complex(q.w, y), Quaternion(0, q.x / y, q.y / y, q.z / y)


def taylor_eval(f_model, q0, q, terms: int) -> Quaternion:
    """Star-power Taylor sum around q0 truncated to `terms` terms.

    For polynomials the series is finite and exact.  For the square root and
    logarithm, q0 must sit in the open right half of its slice plane and q in
    the sigma-ball limited by the branch point.
    """
    q0 = as_quaternion(q0)
    q = as_quaternion(q)
    if isinstance(f_model, SliceRegularPoly):
        derivatives = [slice_derivative(f_model, n)(q0) for n in range(terms)]
    elif isinstance(f_model, PolynomialModel):
        return taylor_eval(SliceRegularPoly(f_model.coefficients), q0, q, terms)
    else:
        z0, unit0 = _slice_split(q0)
        if z0.real <= 0:
            raise OutOfBall(f"expansion point {q0!r} outside the principal half plane")
        r_valid = abs(z0) if abs(z0.imag) < 1e-15 else min(abs(z0), z0.real)
        zq, _ = _slice_split(q)
        if abs(zq - z0) >= r_valid or abs(zq.conjugate() - z0) >= r_valid:
            raise OutOfBall(f"{q!r} outside the sigma-ball of radius {r_valid:g} at {q0!r}")
        derivatives = [
            embed_slice(_principal_derivative(f_model, z0, n), unit0) for n in range(terms)
        ]
    # star powers evaluated by the conjugated-argument recursion
    #   p_(k+1) = p_k * h(p_k^-1 q p_k),  h(q) = q - q0,
    # which sidesteps the catastrophic cancellation of expanded coefficients;
    # once a power vanishes, so do all later ones.
    acc = derivatives[0]
    power = Quaternion(1.0)
    factorial = 1.0
    for n in range(1, terms):
        factorial *= n
        size = power.norm()
        if size < 1e-250:
            break
        unit = power * (1.0 / size)  # conjugation only needs the direction
        moved = unit.conjugate() * q * unit if n > 1 else q
        power = power * (moved - q0)
        acc = acc + power * derivatives[n] * (1.0 / factorial)
    return acc


# -- stem / tensor series equivalence -----------------------------------------


@dataclass(frozen=True)
class SeriesReport:
    stem_series_residual: float
    tensor_series_residual: float
    route_deviation: float
    terms: int
    samples: int

    def to_dict(self) -> dict:
        return {
            "stem_series_residual": self.stem_series_residual,
            "tensor_series_residual": self.tensor_series_residual,
            "route_deviation": self.route_deviation,
            "terms": self.terms,
            "samples": self.samples,
        }


def stem_series_check(
    model: SliceFunctionModel,
    path: NPartPath,
    radius: float,
    terms: int = 30,
    sample_count: int = 8,
    h: float = 1e-5,
    max_route_order: int = 2,
) -> SeriesReport:
    """Compare the three derivative routes and both series expansions.

    The slice route (closed-form derivatives pushed through the invariant
    vector) supplies the coefficients; the stem route differentiates the
    vector directly, the tensor route differentiates its image.  The series
    are then resummed with the matrix substitution x + y*sigma and the tensor
    substitution x + y * i_slotN respectively.
    """
    n_parts = path.parts
    vector = stem_derivative_family(model, path, radius)
    z0 = path.endpoint
    sigma = sigma_matrix(n_parts).astype(float)
    size = 1 << n_parts

    # route agreement at the disk center
    route_dev = 0.0
    slot_n = slot_imaginary(n_parts, n_parts)
    for order in range(1, max_route_order + 1):
        base = lambda z: vector(z, order - 1)  # noqa: E731
        fx = [(a - b) * (0.5 / h) for a, b in zip(base(z0 + h), base(z0 - h))]
        fy = [(a - b) * (0.5 / h) for a, b in zip(base(z0 + h * 1j), base(z0 - h * 1j))]
        stem_route = [
            (x - s) * 0.5 for x, s in zip(fx, apply_real_matrix(sigma, fy))
        ]
        tx = tensor_from_vector(fx)
        ty = tensor_from_vector(fy)
        tensor_route = vector_from_tensor(
            (tx - tensor_mul(slot_n, ty)).scale_right(Quaternion(0.5))
        ).entries
        slice_route = vector(z0, order)
        route_dev = max(
            route_dev,
            max((a - b).norm() for a, b in zip(stem_route, slice_route)),
            max((a - b).norm() for a, b in zip(tensor_route, slice_route)),
        )

    # series resummation on sample points
    coeffs = [vector(z0, n) for n in range(terms)]
    tensor_coeffs = [tensor_from_vector(c) for c in coeffs]
    stem_res = 0.0
    tensor_res = 0.0
    for k in range(sample_count):
        phi = 2 * math.pi * k / sample_count
        z = z0 + 0.9 * radius * complex(math.cos(phi), math.sin(phi))
        dx, dy = (z - z0).real, (z - z0).imag
        direct = vector(z, 0)

        step = dx * np.eye(size) + dy * sigma
        acc = [Quaternion() for _ in range(size)]
        mat = np.eye(size)
        factorial = 1.0
        for n in range(terms):
            if n > 0:
                mat = mat @ step
                factorial *= n
            term = apply_real_matrix(mat, coeffs[n])
            acc = [a + t * (1.0 / factorial) for a, t in zip(acc, term)]
        stem_res = max(stem_res, max((a - b).norm() for a, b in zip(acc, direct)))

        z_step = tensor_one(n_parts).scale_right(Quaternion(dx)) + slot_n.scale_right(Quaternion(dy))
        tacc = tensor_from_vector([Quaternion()] * size)
        tpow = tensor_one(n_parts)
        factorial = 1.0
        for n in range(terms):
            if n > 0:
                tpow = tensor_mul(tpow, z_step)
                factorial *= n
            tacc = tacc + tensor_mul(tpow, tensor_coeffs[n]).scale_right(Quaternion(1.0 / factorial))
        direct_tensor = tensor_from_vector(direct)
        tensor_res = max(tensor_res, (tacc - direct_tensor).max_norm())

    return SeriesReport(
        stem_series_residual=stem_res,
        tensor_series_residual=tensor_res,
        route_deviation=route_dev,
        terms=terms,
        samples=sample_count,
    )
