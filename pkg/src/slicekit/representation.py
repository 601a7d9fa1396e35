"""The representation formula and its invariant coefficient vector.

Evaluating a continued function along the 2**N reference lifts of a path and
hitting the value column with the inverse slice matrix produces a vector that
does not depend on which left slice-linearly independent unit matrix was
used.  The function's value at any other lift is then a plain row-by-column
contraction with the target units' zeta row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import KeysDiffer, LengthMismatch, NotIndependent
from .monodromy import GermKey, SliceFunctionModel, final_state, germ_key
from .paths import NPartPath
from .qmat import QuaternionMatrix, qmat_inverse
from .quat import Quaternion, max_component_distance
from .sliceunits import (
    SliceUnitMatrix,
    eta_inverse,
    eta_row,
    is_left_slice_linearly_independent,
    slice_matrix,
    zeta,
)

VALUE_TOL = 1e-8


@dataclass(frozen=True)
class RepresentationVector:
    """Column of 2**N quaternions encoding one germ along a path."""

    N: int
    entries: tuple[Quaternion, ...]

    def __post_init__(self):
        if len(self.entries) != 1 << self.N:
            raise LengthMismatch(f"vector of order {self.N} needs {1 << self.N} entries")


def _is_eta_stack(j: SliceUnitMatrix) -> bool:
    unit = j.entries[0][0]
    return all(
        j.row(m) == eta_row(j.N, m, unit) for m in range(1, (1 << j.N) + 1)
    )


def _slice_matrix_inverse(j: SliceUnitMatrix) -> QuaternionMatrix:
    if _is_eta_stack(j):
        return eta_inverse(j)
    return qmat_inverse(slice_matrix(j))


def representation_vector(
    model: SliceFunctionModel,
    path: NPartPath,
    j: SliceUnitMatrix,
    x0: float | None = None,
    deriv: int = 0,
) -> RepresentationVector:
    """Invariant vector M(J)**-1 applied to the column of lifted values.

    With deriv = n the column holds the n-th slice derivative instead, which
    is the stem of the derivative along the same path.
    """
    if j.N != path.parts:
        raise LengthMismatch(f"{path.parts}-part path against an order-{j.N} unit matrix")
    if not is_left_slice_linearly_independent(j):
        raise NotIndependent("unit matrix is left slice-linearly dependent")
    column = tuple(
        model.derivative_value(final_state(model, path, row, x0), deriv) for row in j.rows
    )
    inverse = _slice_matrix_inverse(j)
    return RepresentationVector(j.N, inverse.apply_column(column))


def evaluate_via_formula(g: RepresentationVector, units: Sequence[Quaternion]) -> Quaternion:
    """zeta(K) contracted against the vector: the value at the K-lift."""
    if len(units) != g.N:
        raise LengthMismatch(f"vector of order {g.N} contracted with {len(units)} units")
    row = zeta(units)
    acc = Quaternion()
    for coeff, entry in zip(row, g.entries):
        acc = acc + coeff * entry
    return acc


def invariance_check(
    model: SliceFunctionModel,
    path: NPartPath,
    j1: SliceUnitMatrix,
    j2: SliceUnitMatrix,
    x0: float | None = None,
) -> float:
    """Max entrywise deviation between the vectors from two unit matrices."""
    g1 = representation_vector(model, path, j1, x0)
    g2 = representation_vector(model, path, j2, x0)
    return max_component_distance(g1.entries, g2.entries)


def axial_symmetry_probe(
    model: SliceFunctionModel,
    path: NPartPath,
    rng,
    samples: int = 32,
) -> bool:
    """Smoke test that lifts with random unit tuples all continue cleanly.

    The built-in domains admit every lift of an admissible path; this samples
    that property rather than proving it, and returns False on the first
    failed continuation.
    """
    from .quat import random_imaginary_unit

    for _ in range(samples):
        units = tuple(random_imaginary_unit(rng) for _ in range(path.parts))
        try:
            model.value(final_state(model, path, units))
        except Exception:
            return False
    return True


@dataclass(frozen=True)
class ExtendabilityReport:
    verdict: str  # "extendable" | "obstructed"
    values: tuple[Quaternion, ...]
    keys: tuple[GermKey, ...]
    witness: tuple[Quaternion, Quaternion] | None

    @property
    def extendable(self) -> bool:
        return self.verdict == "extendable"


def extendability_check(
    model: SliceFunctionModel,
    reached: Sequence[tuple[NPartPath, Sequence[Quaternion]]],
    equivalence_model: SliceFunctionModel,
    key_tol: float = 1e-9,
    value_tol: float = VALUE_TOL,
) -> ExtendabilityReport:
    """Do several routes to one point of the equivalence domain agree?

    All (path, units) pairs must name a single point of the domain carved out
    by `equivalence_model` (equal germ keys), otherwise KeysDiffer.  The
    verdict is "extendable" when `model`'s values along all routes agree, and
    "obstructed" with the first conflicting pair as witness otherwise.
    """
    keys = []
    values = []
    for path, units in reached:
        state = final_state(equivalence_model, path, units)
        keys.append(germ_key(equivalence_model, state))
        values.append(model.value(final_state(model, path, units)))
    for other in keys[1:]:
        if not keys[0].isclose(other, key_tol):
            raise KeysDiffer(f"germ keys disagree: {keys[0]} vs {other}")
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if (values[i] - values[j]).norm() > value_tol:
                return ExtendabilityReport("obstructed", tuple(values), tuple(keys), (values[i], values[j]))
    return ExtendabilityReport("extendable", tuple(values), tuple(keys), None)
