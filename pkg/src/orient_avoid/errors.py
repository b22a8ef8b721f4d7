"""Exception hierarchy shared by every module."""


class OrientAvoidError(Exception):
    """Base class for all errors raised by this package."""

    code = "Error"


class LoopEdge(OrientAvoidError):
    code = "LoopEdge"

    def __init__(self, index: int):
        super().__init__(f"edge {index} has equal endpoints")
        self.index = index


class VertexOutOfRange(OrientAvoidError):
    code = "VertexOutOfRange"

    def __init__(self, vertex, n_vertices: int):
        super().__init__(f"vertex {vertex!r} outside [0, {n_vertices})")
        self.vertex = vertex


class NotConnected(OrientAvoidError):
    code = "NotConnected"


class Not2Connected(OrientAvoidError):
    code = "Not2Connected"


class EmptyAllowedSet(OrientAvoidError):
    code = "EmptyAllowedSet"

    def __init__(self, vertex: int):
        super().__init__(f"vertex {vertex} has no allowed out-degree")
        self.vertex = vertex


class DensityViolation(OrientAvoidError):
    code = "DensityViolation"

    def __init__(self, violations):
        text = ", ".join(f"({v.vertex}, {v.value})" for v in violations)
        super().__init__(f"forbidden sets contain consecutive values: {text}")
        self.violations = list(violations)


class NotATrail(OrientAvoidError):
    code = "NotATrail"


class TooManyUnresolvedComponents(OrientAvoidError):
    code = "TooManyUnresolvedComponents"


class TooManyEdges(OrientAvoidError):
    code = "TooManyEdges"


class InfeasibleParameters(OrientAvoidError):
    code = "InfeasibleParameters"


class MalformedInstance(OrientAvoidError):
    code = "MalformedJson"


class InternalInvariantBroken(AssertionError):
    """Raised when a proven invariant fails; always indicates a bug."""
