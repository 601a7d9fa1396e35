"""Independent brute-force oracles used to pin expected values.

These deliberately avoid the library's complex-adjoint and structure-constant
code paths: left-linear independence is decided by the smallest singular
value of the real linear system over the combination coefficients, and slice
derivatives by finite differences on a single slice.
"""

import numpy as np

from slicekit.quat import Quaternion, embed_slice


def _right_mult_matrix(v: Quaternion) -> np.ndarray:
    """4x4 real matrix of q -> q * v acting on q's components."""
    columns = []
    for e in (Quaternion(1, 0, 0, 0), Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)):
        prod = e * v
        columns.append([prod.w, prod.x, prod.y, prod.z])
    return np.array(columns).T


def left_combination_min_singular(vectors) -> float:
    """Smallest singular value of sum(q_i * v_i) = 0 as a real system.

    Positive (well away from zero) means the vectors are left linearly
    independent; numerically zero means a nontrivial combination exists.
    """
    k = len(vectors)
    n = len(vectors[0])
    system = np.zeros((4 * n, 4 * k))
    for i, vec in enumerate(vectors):
        for comp in range(n):
            system[4 * comp : 4 * comp + 4, 4 * i : 4 * i + 4] = _right_mult_matrix(vec[comp])
    return float(np.linalg.svd(system, compute_uv=False)[-1])


def numeric_slice_derivative(f, z0: complex, unit, order: int = 1, h: float = 1e-4) -> Quaternion:
    """Finite-difference slice derivative of f at z0 on the given slice.

    f takes a quaternion; differentiation runs along the real direction of
    the slice, which equals the slice derivative for slice regular f.
    """
    stencils = {
        1: ((-0.5, -1), (0.5, 1)),
        2: ((1.0, -1), (-2.0, 0), (1.0, 1)),
    }
    acc = Quaternion()
    for weight, step in stencils[order]:
        point = embed_slice(z0 + step * h, unit)
        acc = acc + f(point) * (weight / h**order)
    return acc
