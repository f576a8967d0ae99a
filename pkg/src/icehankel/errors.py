"""Exception hierarchy for icehankel."""


class IceHankelError(Exception):
    """Base class for all errors raised by this package."""


class PhaseError(IceHankelError, ValueError):
    """Parameters fall outside the disordered window |t| < gamma < pi/2."""


class PrecisionError(IceHankelError):
    """A requested expansion order exceeds the configured work bound."""


class ConditioningError(IceHankelError, ArithmeticError):
    """A Hankel pivot is non-positive or lost all significant digits."""


class NonConvergence(IceHankelError):
    """Precision doubling hit the configured ceiling before agreement."""


class CapExceeded(IceHankelError, ValueError):
    """Enumeration size is above the configured cap."""


class InvalidASM(IceHankelError, ValueError):
    """A matrix violates the alternating-sign conditions."""


class QuadratureError(IceHankelError):
    """A numerical integral did not meet its tolerance."""


class BranchError(IceHankelError, ValueError):
    """A point lies on a branch cut where the function is undefined."""


class RootFindError(IceHankelError):
    """Newton iteration for the endpoint system failed to converge."""


class DegenerateFit(IceHankelError, ValueError):
    """Least-squares data cannot determine a slope."""
