"""Exception hierarchy shared by every module of the package."""


class CayleyError(Exception):
    """Base class for all package errors."""


class BadParameter(CayleyError, ValueError):
    pass


class NotAUnit(CayleyError, ValueError):
    pass


class OrderMismatch(CayleyError, ValueError):
    pass


class CoordinateOutOfRange(CayleyError, ValueError):
    pass


class IndexOutOfRange(CayleyError, IndexError):
    pass


class ContainsIdentity(CayleyError, ValueError):
    pass


class EmptySet(CayleyError, ValueError):
    pass


class MemoryBudgetExceeded(CayleyError):
    pass


class DistanceOverflow(CayleyError):
    """A BFS level went past the 254 limit of the byte distance array."""


class TooLarge(CayleyError):
    pass


class InfeasibleDegree(CayleyError, ValueError):
    pass


class RetryBudgetExhausted(CayleyError):
    pass


class MooreInfeasible(CayleyError, ValueError):
    pass


class ParseError(CayleyError, ValueError):
    pass


class SpecInvalid(CayleyError, ValueError):
    pass


class SinkError(CayleyError, OSError):
    pass
