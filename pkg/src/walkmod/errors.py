"""Exception hierarchy shared by every walkmod module."""


class WalkmodError(Exception):
    """Base class for all errors raised by walkmod."""


class GraphError(WalkmodError):
    pass


class EmptyGraph(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class Disconnected(GraphError):
    pass


class EmptyVertexSet(GraphError):
    pass


class UnknownVertex(GraphError):
    pass


class InvalidWalk(WalkmodError):
    pass


class DimensionMismatch(WalkmodError):
    pass


class NegativeEntry(WalkmodError):
    pass


class Unreachable(WalkmodError):
    pass


class EmptyFamily(WalkmodError):
    pass


class TrivialWalkInFamily(WalkmodError):
    pass


class InnerIterationLimit(WalkmodError):
    pass


class InvalidP(WalkmodError):
    pass


class InvalidConfig(WalkmodError):
    pass


class NotConverged(WalkmodError):
    pass


class UnitLengthViolation(WalkmodError):
    pass


class OverlappingSets(WalkmodError):
    pass


class TooLarge(WalkmodError):
    pass


class UnknownRule(WalkmodError):
    pass


class NTooSmall(WalkmodError):
    pass


class InvalidProbability(WalkmodError):
    pass
