"""Exception types raised across the package."""


class RaynaudError(Exception):
    """Base class for all errors raised by raynaudcoh."""


class PrecisionError(RaynaudError):
    """A request exceeds the truncation available at the working precision."""


class ShapeError(RaynaudError, ValueError):
    """Operands have mismatched fields, lengths, degrees or summand shapes."""


class NotNilpotentError(RaynaudError):
    """An operator failed to become zero within the allowed number of powers."""


class OracleRefused(RaynaudError):
    """The brute-force oracle was asked to enumerate a group that is too large."""


class UnsupportedVariety(RaynaudError, ValueError):
    pass


class InvariantViolation(RaynaudError):
    """Two independent computations disagreed, or a structural relation failed."""
