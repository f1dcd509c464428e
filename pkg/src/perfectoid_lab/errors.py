"""Exceptions raised by perfectoid_lab.

Every error carries a stable string code and the CLI exit status it maps to
(1 verification failure, 2 usage error, 3 precision or depth exhaustion).
"""


class LabError(Exception):
    code = "E_LAB"
    exit_code = 1


class DepthExceeded(LabError):
    code = "E_DEPTH"
    exit_code = 3


class PrecisionIndeterminate(LabError):
    """Raised when a value cannot be decided at the working precision.

    ``bound`` holds the "at least" marker, e.g. the valuation of a zero
    series is only known to be >= its t-precision.
    """

    code = "E_PRECISION"
    exit_code = 3

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class CeilingExceeded(LabError):
    code = "E_CEILING"
    exit_code = 3


class NotDivisible(LabError):
    code = "E_NOT_DIVISIBLE"


class NoStabilization(LabError):
    code = "E_NO_STABILIZATION"


class UnboundedRegion(LabError):
    code = "E_UNBOUNDED"
    exit_code = 2


class EmptyIntersection(LabError):
    code = "E_EMPTY"


class DomainMismatch(LabError):
    code = "E_DOMAIN"
    exit_code = 2


class PoleAtPoint(LabError):
    code = "E_POLE"


class DegenerateDenominator(LabError):
    code = "E_DEGENERATE"


class NoRootsAvailable(LabError):
    code = "E_NO_ROOTS"
    exit_code = 2


class NoRootCertificate(LabError):
    code = "E_NO_ROOT_CERT"
    exit_code = 2


class NotRepresentable(LabError):
    code = "E_NOT_REPRESENTABLE"
    exit_code = 2


class ExprSyntaxError(LabError):
    code = "E_SYNTAX"
    exit_code = 2

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class InvalidExponent(LabError):
    code = "E_EXPONENT"
    exit_code = 2


class SideMismatch(LabError):
    code = "E_SIDE"
    exit_code = 2
