"""Multi-sheet continuation of slice functions along lifted paths.

Instead of naming sheets explicitly, a state keeps universal-cover
coordinates (r, theta) for the complex position together with the current
slice unit and a sheet datum.  The square root composes its datum
multiplicatively, the logarithm additively, and polynomials carry none.
Switching slices is only allowed at nonzero real points, where the
coordinates snap back to theta in {0, pi} and the datum absorbs whatever the
value requires; germ keys (projected point, value) then identify points of
the underlying multi-sheet domain.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import (
    BranchPoint,
    BranchPointCrossing,
    LengthMismatch,
    NotAtRealPoint,
)
from .paths import NPartPath, PathSegment
from .quat import Quaternion, as_quaternion, embed_slice, quat_inverse, unit_exp

#: segments closer than this to the origin cross the branch locus
BRANCH_TOL = 1e-9

#: tolerance for "the projected point is real"
REAL_TOL = 1e-9

GERM_TOL = 1e-9


@dataclass(frozen=True)
class SheetState:
    """Covering coordinates plus slice unit and sheet datum."""

    r: float
    theta: float
    unit: Quaternion
    datum: Quaternion | None

    @property
    def complex_point(self) -> complex:
        return self.r * cmath.exp(1j * self.theta)

    @property
    def projected_point(self) -> Quaternion:
        return embed_slice(self.complex_point, self.unit)


@dataclass(frozen=True)
class GermKey:
    """(projected point, value) pair naming a point of the quotient domain."""

    point: Quaternion
    value: Quaternion

    def isclose(self, other: "GermKey", tol: float = GERM_TOL) -> bool:
        return (self.point - other.point).norm() <= tol and (self.value - other.value).norm() <= tol


def _poly_eval(coeffs: Sequence[Quaternion], q: Quaternion) -> Quaternion:
    """Right-coefficient Horner: a0 + q*(a1 + q*(a2 + ...))."""
    acc = Quaternion()
    for a in reversed(coeffs):
        acc = q * acc + a
    return acc


def _poly_derivative(coeffs: Sequence[Quaternion], n: int) -> tuple[Quaternion, ...]:
    out = list(coeffs)
    for _ in range(n):
        out = [out[k] * float(k) for k in range(1, len(out))]
        if not out:
            return (Quaternion(),)
    return tuple(out)


class SliceFunctionModel:
    """Interface of the built-in continuable models."""

    kind: str
    datum_kind: str  # multiplicative | additive | none

    def initial_datum(self) -> Quaternion | None:
        raise NotImplementedError

    def accepts_start(self, x0: float) -> bool:
        raise NotImplementedError

    def value(self, state: SheetState) -> Quaternion:
        raise NotImplementedError

    def derivative_value(self, state: SheetState, n: int) -> Quaternion:
        """Value of the n-th slice derivative continued to the same sheet."""
        raise NotImplementedError

    def datum_for(self, value: Quaternion, r: float, theta: float, unit: Quaternion) -> Quaternion | None:
        """Datum making the state at (r, theta, unit) take the given value."""
        raise NotImplementedError

    def is_branched(self) -> bool:
        return self.datum_kind != "none"


class SqrtModel(SliceFunctionModel):
    """Continuation of the square root; restriction to R+ is sqrt(x)."""

    kind = "sqrt"
    datum_kind = "multiplicative"

    def initial_datum(self) -> Quaternion:
        return Quaternion(1.0)

    def accepts_start(self, x0: float) -> bool:
        return x0 > 0.0

    def value(self, state: SheetState) -> Quaternion:
        return self.derivative_value(state, 0)

    def derivative_value(self, state: SheetState, n: int) -> Quaternion:
        coeff = 1.0
        for k in range(n):
            coeff *= 0.5 - k
        power = 0.5 - n
        radial = coeff * state.r**power
        return radial * unit_exp(power * state.theta, state.unit) * state.datum

    def datum_for(self, value: Quaternion, r: float, theta: float, unit: Quaternion) -> Quaternion:
        base = math.sqrt(r) * unit_exp(0.5 * theta, unit)
        return quat_inverse(base) * value


class LogModel(SliceFunctionModel):
    """Continuation of the natural logarithm; restriction to R+ is ln(x).

    Additive sheet data live in all of H, not just on the real axis: a slice
    switch at a negative point turns pi*K1 into the offset pi*K1 - pi*K2,
    which is genuinely non-real.  Restricting the datum to reals would break
    value continuity across switches, so no such restriction is imposed.
    """

    kind = "log"
    datum_kind = "additive"

    def initial_datum(self) -> Quaternion:
        return Quaternion(0.0)

    def accepts_start(self, x0: float) -> bool:
        return x0 > 0.0

    def value(self, state: SheetState) -> Quaternion:
        return Quaternion(math.log(state.r)) + state.theta * state.unit + state.datum

    def derivative_value(self, state: SheetState, n: int) -> Quaternion:
        if n == 0:
            return self.value(state)
        coeff = (-1.0) ** (n - 1) * math.factorial(n - 1)
        return coeff * state.r ** (-n) * unit_exp(-n * state.theta, state.unit)

    def datum_for(self, value: Quaternion, r: float, theta: float, unit: Quaternion) -> Quaternion:
        return value - (Quaternion(math.log(r)) + theta * unit)


class PolynomialModel(SliceFunctionModel):
    """Entire model sum q**n * a_n with right coefficients; single valued."""

    kind = "polynomial"
    datum_kind = "none"

    def __init__(self, coefficients: Sequence[Quaternion]):
        self.coefficients = tuple(as_quaternion(c) for c in coefficients)

    def initial_datum(self) -> None:
        return None

    def accepts_start(self, x0: float) -> bool:
        return True

    def value(self, state: SheetState) -> Quaternion:
        return _poly_eval(self.coefficients, state.projected_point)

    def derivative_value(self, state: SheetState, n: int) -> Quaternion:
        return _poly_eval(_poly_derivative(self.coefficients, n), state.projected_point)

    def datum_for(self, value: Quaternion, r: float, theta: float, unit: Quaternion) -> None:
        return None


def model_by_name(name: str, coefficients: Sequence[Quaternion] | None = None) -> SliceFunctionModel:
    if name == "sqrt":
        return SqrtModel()
    if name == "log":
        return LogModel()
    if name in ("poly", "polynomial"):
        if coefficients is None:
            raise ValueError("polynomial model needs coefficients")
        return PolynomialModel(coefficients)
    raise ValueError(f"unknown model {name!r}")


def initial_state(model: SliceFunctionModel, x0: float, unit: Quaternion) -> SheetState:
    """Canonical germ over a real starting point on the principal sheet."""
    if model.is_branched() and not model.accepts_start(x0):
        raise BranchPoint(f"model {model.kind} cannot start at {x0}")
    if x0 >= 0:
        r, theta = float(x0), 0.0
    else:
        r, theta = -float(x0), math.pi
    return SheetState(r=r, theta=theta, unit=unit, datum=model.initial_datum())


def continue_segment(model: SliceFunctionModel, state: SheetState, seg: PathSegment) -> SheetState:
    """Slide the state along one complex segment inside the current slice."""
    z_here = state.complex_point
    if abs(seg.start - z_here) > 1e-7 * max(1.0, abs(z_here)):
        raise ValueError(f"segment starts at {seg.start}, state sits at {z_here}")
    clearance = seg.min_distance_to_origin()
    if model.is_branched() and clearance <= BRANCH_TOL:
        raise BranchPointCrossing(f"segment passes within {clearance:g} of the branch point")
    if clearance <= BRANCH_TOL:
        # entire model: winding is irrelevant, restart from the principal arg
        z_end = seg.end
        return replace(state, r=abs(z_end), theta=cmath.phase(z_end) if z_end != 0 else 0.0)
    return replace(state, r=abs(seg.end), theta=state.theta + seg.argument_increment())


def junction_switch(model: SliceFunctionModel, state: SheetState, new_unit: Quaternion) -> SheetState:
    """Re-anchor the germ at a real point into another slice.

    Coordinates snap to theta in {0, pi}; the datum is re-solved so the value
    is continuous across the switch.
    """
    if state.r <= BRANCH_TOL or abs(math.sin(state.theta)) > REAL_TOL:
        raise NotAtRealPoint(f"projected point {state.complex_point} is not real and nonzero")
    theta_new = 0.0 if math.cos(state.theta) > 0 else math.pi
    value = model.value(state)
    datum = model.datum_for(value, state.r, theta_new, new_unit)
    return SheetState(r=state.r, theta=theta_new, unit=new_unit, datum=datum)


def final_state(
    model: SliceFunctionModel,
    path: NPartPath,
    units: Sequence[Quaternion],
    x0: float | None = None,
    initial_unit: Quaternion | None = None,
) -> SheetState:
    """Fold continuation and junction switches over the parts of a lift."""
    if len(units) != path.parts:
        raise LengthMismatch(f"{path.parts}-part path continued with {len(units)} units")
    start = path.initial_point
    if abs(start.imag) > REAL_TOL:
        raise BranchPoint(f"path must start on the real axis, got {start}")
    if x0 is not None and abs(start.real - x0) > 1e-9:
        raise ValueError(f"path starts at {start.real}, expected {x0}")
    state = initial_state(model, start.real, initial_unit if initial_unit is not None else units[0])
    if initial_unit is not None:
        state = junction_switch(model, state, units[0])
    for part, seg in enumerate(path.segments):
        if part > 0:
            state = junction_switch(model, state, units[part])
        state = continue_segment(model, state, seg)
    return state


def evaluate_lifted(
    model: SliceFunctionModel,
    path: NPartPath,
    units: Sequence[Quaternion],
    x0: float | None = None,
    initial_unit: Quaternion | None = None,
) -> Quaternion:
    """Value of the continued function at the endpoint of the lifted path."""
    return model.value(final_state(model, path, units, x0, initial_unit))


def germ_key(model: SliceFunctionModel, state: SheetState) -> GermKey:
    return GermKey(point=state.projected_point, value=model.value(state))
