"""Exception hierarchy shared by every module."""


class GeometryError(Exception):
    """Base class for all errors raised by helixsub."""


class NumericalDomain(GeometryError, ArithmeticError):
    """A function was evaluated outside its real domain or produced a non-finite value."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class OutOfDomain(GeometryError, ValueError):
    """A parameter point lies outside the chart domain."""


class RankDeficient(GeometryError):
    """The Jacobian lost rank: the map is not an immersion at this point."""

    def __init__(self, message, u=None):
        super().__init__(message)
        self.u = u


class NotNormal(GeometryError, ValueError):
    """A supplied vector is not a unit normal."""


class SingularMetric(GeometryError):
    pass


class IrregularCurve(GeometryError):
    pass


class NotUnitSpeed(GeometryError, ValueError):
    pass


class DegenerateFrame(GeometryError):
    """The Frenet frame has too low a rank for the requested vector."""

    def __init__(self, message, t=None, rank=None):
        super().__init__(message)
        self.t = t
        self.rank = rank


class NotInSpace(GeometryError, ValueError):
    pass


class DegenerateDecomposition(GeometryError):
    pass


class CodimensionMismatch(GeometryError, ValueError):
    pass


class FlowError(GeometryError):
    """Base for tracing failures; ``result`` holds the trace up to the last good point."""

    def __init__(self, message, u=None, result=None):
        super().__init__(message)
        self.u = u
        self.result = result


class LeftDomain(FlowError):
    pass


class UmbilicEncountered(FlowError):
    pass


class UnknownEntry(GeometryError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class BadParameter(GeometryError, ValueError):
    pass


class ExpressionError(GeometryError, ValueError):
    """Base for expression-language errors; ``position`` is 1-based."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position


class ExprSyntaxError(ExpressionError):
    def __init__(self, message, position, expected=()):
        self.expected = tuple(sorted(set(expected)))
        if self.expected:
            message = f"{message}; expected one of {', '.join(self.expected)}"
        super().__init__(message, position)


class UnknownIdentifier(ExpressionError):
    pass


class ArityError(ExpressionError):
    pass


class ComponentCountMismatch(ExpressionError):
    pass
