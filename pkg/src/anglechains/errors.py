"""Exception hierarchy shared by every module of the package."""


class AngleChainError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(AngleChainError, ValueError):
    pass


class DegenerateAngle(AngleChainError, ValueError):
    """A triple whose vertex coincides with one of its endpoints."""


class ParseError(AngleChainError, ValueError):
    pass


class OutOfRange(AngleChainError, ValueError):
    pass


class QueryInvalid(AngleChainError, ValueError):
    pass


class UnsupportedSemantics(AngleChainError, ValueError):
    pass


class DuplicatePoints(AngleChainError, ValueError):
    pass


class InvalidParams(AngleChainError, ValueError):
    pass


class Infeasible(AngleChainError, ValueError):
    pass


class DegenerateFit(AngleChainError, ValueError):
    pass


class BudgetExceeded(AngleChainError, RuntimeError):
    pass


class FormatError(AngleChainError, ValueError):
    """Malformed point-set file; the message carries line/field context."""
