"""Exception hierarchy shared by every module."""

from __future__ import annotations


class GraphFactorError(Exception):
    """Base class for all errors raised by graphfactors."""


class ParseError(GraphFactorError, ValueError):
    """Input text could not be decoded."""


class Graph6Error(ParseError):
    """Malformed graph6 line."""


class Graph6HeaderError(Graph6Error):
    """The size byte is missing or outside the supported range."""


class Graph6TruncatedError(Graph6Error):
    """Fewer data bytes than the header promises."""


class Graph6TrailingDataError(Graph6Error):
    """Extra bytes after the bit vector."""


class EdgeListError(ParseError):
    """Malformed edge-list text."""


class FSpecError(ParseError):
    """Malformed or invalid vertex weight function."""


class InvalidVertexError(GraphFactorError, ValueError):
    def __init__(self, vertex, n: int):
        super().__init__(f"vertex {vertex!r} not in range 0..{n - 1}")
        self.vertex = vertex
        self.n = n


class GuardError(GraphFactorError):
    """An exhaustive routine was asked to exceed its size guard."""


class CapExceeded(GraphFactorError):
    """A family or branch enumeration would exceed its cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} of size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class UnsupportedDegreeSet(GraphFactorError):
    """A degree set reached a solver that cannot handle its shape."""


class IsolatedBlueVertex(GraphFactorError):
    """A B-coloured vertex has no achievable odd degree."""

    def __init__(self, vertex: int):
        super().__init__(f"vertex {vertex} is coloured B but has no odd degree available")
        self.vertex = vertex


class NotInFamily(GraphFactorError, ValueError):
    """An assignment is not a member of the family it was claimed to come from."""


class NotPerfectMatching(GraphFactorError, ValueError):
    pass


class ForeignEdgeError(GraphFactorError, ValueError):
    """A certificate references an edge instance absent from the host graph."""
