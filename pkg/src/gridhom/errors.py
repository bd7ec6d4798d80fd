"""Exception types shared across the package."""


class GridHomError(Exception):
    """Base class for all package errors."""


class MalformedGrid(GridHomError):
    """Row/column marking counts violate the grid rules."""


class OverlappingMarkings(GridHomError):
    """Two markings occupy the same cell."""


class GridTooLarge(GridHomError):
    """Grid size exceeds the configured cap."""


class SizeMismatch(GridHomError):
    """States or complexes built from grids of different sizes."""


class NotTwoComponents(GridHomError):
    """Operation requires a two-component link grid."""


class InvariantViolation(GridHomError):
    """A structural invariant (e.g. d^2 = 0) failed."""


class NotDivisible(GridHomError):
    """Exact polynomial division has a nonzero remainder."""


class NoSolution(GridHomError):
    """Linear system has no solution over F2."""


class NotSymmetric(GridHomError):
    """No pi-rotation symmetry matches the grid markings."""


class NotEquivariant(GridHomError):
    """Claimed involution is not a chain involution."""


class NonStabilizing(GridHomError):
    """Spectral sequence did not stabilize within max_r pages."""


class UnexpectedSurvivorCount(GridHomError):
    """Spectral sequence survivor count differs from the expected one."""


class NotChainMap(GridHomError):
    """Map fails to commute with the differentials."""


class CentralPatternMismatch(GridHomError):
    """Grid center does not carry the expected crossing pattern."""


class MismatchReport(GridHomError):
    """Localization comparison failed; details carried in args."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or []
