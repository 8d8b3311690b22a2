"""Exception types raised across the package."""


class InvalidInputError(ValueError):
    """Malformed or out-of-domain argument."""


class UnsupportedOrderError(InvalidInputError):
    """Derivative order beyond what a model supplies analytically."""


class InvalidFrameError(InvalidInputError):
    """Frame transformation that is not unitary or inconsistent with its derivative."""


class DegenerateSchemeError(InvalidInputError):
    """Ceiling formula produced repeated step counts."""


class SingularSystemError(InvalidInputError):
    """Vandermonde system with repeated nodes."""


class TooLargeError(InvalidInputError):
    """Requested object exceeds the dense-matrix caps."""


class InvalidStateError(InvalidInputError):
    """State vector with wrong shape or norm."""


class DegenerateModelError(InvalidInputError):
    """LCU model with no weight."""


class OverflowGuardError(InvalidInputError):
    """Exact integer evaluation refused beyond its cap."""


class ConvergenceError(RuntimeError):
    """Iterative reference computation failed to settle."""


class BudgetInfeasibleError(RuntimeError):
    """Error budget cannot be met with a sane number of steps."""
