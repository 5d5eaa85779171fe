"""Exception hierarchy shared by every module of the package."""


class HelixMobiusError(Exception):
    """Base class for all computation failures raised by this package."""

    #: short machine-readable tag used in CLI error records
    kind = "error"


class DomainError(HelixMobiusError, ValueError):
    kind = "domain"


class ToleranceNotReached(HelixMobiusError):
    kind = "tolerance_not_reached"


class PoleError(HelixMobiusError, ZeroDivisionError):
    kind = "pole"


class OverflowGuardError(HelixMobiusError, OverflowError):
    kind = "overflow_guard"


class NonConvergenceError(HelixMobiusError):
    kind = "non_convergence"


class StripViolationError(HelixMobiusError):
    kind = "strip_violation"


class NoSignChangeError(HelixMobiusError):
    kind = "no_sign_change"


class IndeterminateCountError(HelixMobiusError):
    kind = "indeterminate_count"


class DegeneracyError(HelixMobiusError):
    kind = "degeneracy"


class CostGuardError(HelixMobiusError):
    kind = "cost_guard"
