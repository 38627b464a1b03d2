"""Exception hierarchy.

Every error raised by the library derives from :class:`GraphBoundaryError`;
input problems additionally derive from :class:`InputError` so the CLI can
map them to exit code 1.
"""


class GraphBoundaryError(Exception):
    """Base class for all library errors."""


class InputError(GraphBoundaryError, ValueError):
    """Malformed or unsupported input."""


class EmptyGraph(InputError):
    pass


class VertexOutOfRange(InputError):
    pass


class SelfLoop(InputError):
    pass


class DuplicateEdge(InputError):
    pass


class Disconnected(InputError):
    pass


class DegenerateGraph(InputError):
    """Single-vertex graph where a diameter-based quantity is undefined."""


class InvalidWitness(InputError):
    pass


class EmptyAbsorbingSet(InputError):
    pass


class EmptyX(InputError):
    pass


class XCoversAllVertices(InputError):
    pass


class LengthMismatch(InputError):
    pass


class ZeroFunction(InputError):
    pass


class InteriorEmpty(GraphBoundaryError):
    pass


class SpectrumTooLarge(GraphBoundaryError):
    pass


class WalkCapExceeded(GraphBoundaryError):
    pass


class WUndefinedWhereFNonzero(InputError):
    pass


class FNotVanishingOnBoundary(InputError):
    pass


class NotAMeasure(InputError):
    pass


class VertexInBoundary(InputError):
    pass


class ZeroMass(InputError):
    pass


class KernelNotAdmissible(InputError):
    pass


class NonTermination(GraphBoundaryError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class BadChecksumLength(ParseError):
    """graph6 payload length does not match the encoded vertex count."""


class NonPrintableByte(ParseError):
    pass


class DisconnectedAfterParse(ParseError):
    pass
