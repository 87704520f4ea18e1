"""Exception hierarchy shared by all modules."""


class HadamardError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(HadamardError, ValueError):
    pass


class InvalidArgument(HadamardError, ValueError):
    pass


class UnsupportedDomain(HadamardError, TypeError):
    pass


class UnboundedDomain(HadamardError, ValueError):
    pass


class DegenerateNormal(HadamardError, ArithmeticError):
    pass


class RangeRequired(HadamardError, ValueError):
    """An unbounded domain was given without a caller-certified log-radius range."""


class OriginExcluded(HadamardError, ValueError):
    pass


class QuadratureFailure(HadamardError, ArithmeticError):
    """Node doubling did not reach the requested agreement."""


class InternalError(HadamardError, AssertionError):
    """Raised when mutually exclusive certificates are both found."""
