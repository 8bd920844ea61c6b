"""Exception hierarchy shared by every module."""


class SociographError(Exception):
    """Base class. The CLI maps these to exit status 1."""


class GraphError(SociographError, ValueError):
    pass


class DuplicateLabel(GraphError):
    pass


class EmptyLabel(GraphError):
    pass


class UnknownNode(GraphError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class NonpositiveWeight(GraphError):
    pass


class ModeMismatch(GraphError):
    pass


class UnweightedGraph(GraphError):
    pass


class DirectedUnsupported(GraphError):
    pass


class EmptyGraph(GraphError):
    pass


class SizeTooSmall(GraphError):
    pass


class BadParameters(GraphError):
    pass


# parsing


class ParseError(SociographError, ValueError):
    """Input text could not be turned into a graph.

    ``line`` is the 1-based line number when the problem is tied to one row.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedRow(ParseError):
    pass


class NonSquare(ParseError):
    pass


class AsymmetricUndirected(ParseError):
    pass


class NegativeEntry(ParseError):
    pass


class NonzeroDiagonal(ParseError):
    pass


class UnknownAlterColumn(ParseError):
    pass


class NegativeRating(ParseError):
    pass


class FixedChoiceViolation(ParseError):
    pass


class NonfiniteScore(SociographError, ValueError):
    pass


# numerical measures


class NotConnected(GraphError):
    pass


class NoConvergence(SociographError, ArithmeticError):
    pass


class AlphaTooLarge(GraphError):
    pass


class IsolatedNode(GraphError):
    pass


class EgoMismatch(GraphError):
    pass


class UnassignedNode(GraphError):
    pass


# multilayer


class NodeAbsentFromLayer(GraphError):
    pass


class SameLayerInterlayer(GraphError):
    pass


class MultiplexViolation(GraphError):
    pass


class RegistryMismatch(GraphError):
    pass
