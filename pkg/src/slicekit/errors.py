"""Exception hierarchy shared across the package."""


class SliceKitError(Exception):
    """Base class for all slicekit errors."""


class ZeroDivisor(SliceKitError):
    """Inversion of a (near-)zero quaternion."""


class ShapeMismatch(SliceKitError):
    """Incompatible matrix / vector shapes."""


class Singular(SliceKitError):
    """Matrix has no two-sided inverse."""


class NotIndependent(SliceKitError):
    """Slice-unit matrix is not left slice-linearly independent."""


class IndexOutOfRange(SliceKitError):
    """Basis or unit-product index outside 1..2**N."""


class NonRealJunction(SliceKitError):
    """Multi-part path whose segments do not meet on the real axis."""


class DisconnectedSegments(SliceKitError):
    """Consecutive path segments with mismatched endpoints."""


class OutOfRange(SliceKitError):
    """Path parameter outside [0, 1]."""


class LengthMismatch(SliceKitError):
    """Unit tuple length does not match the path's part count."""


class BranchPoint(SliceKitError):
    """Attempt to start a branched model at its branch point."""


class BranchPointCrossing(SliceKitError):
    """Continuation segment passes through a branch point."""


class NotAtRealPoint(SliceKitError):
    """Slice switch requested away from the real axis."""


class KeysDiffer(SliceKitError):
    """Paths claimed to reach one point have distinct germ keys."""


class IncompatibleSupports(SliceKitError):
    """Stem systems with different path sets, radii or grids."""


class OutOfDomain(SliceKitError):
    """Evaluation point outside a stem function's disk."""


class OutOfBall(SliceKitError):
    """Series evaluation outside its ball of validity."""


class SymmetrizationZero(SliceKitError):
    """Symmetrization vanishes somewhere on the requested domain."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
