"""Exception hierarchy for linspp.

Library code raises these; only the CLI turns them into exit codes.
"""

from __future__ import annotations


class LinsppError(Exception):
    """Base class for every error raised by linspp."""


# Graph construction and queries


class GraphError(LinsppError):
    """Invalid or unusable digraph."""


class EmptyArcList(GraphError):
    def __init__(self) -> None:
        super().__init__("arc list is empty")


class CycleDetected(GraphError):
    def __init__(self, cycle: list[int] | None = None) -> None:
        self.cycle = cycle or []
        detail = f": arcs {self.cycle}" if self.cycle else ""
        super().__init__(f"digraph contains a directed cycle{detail}")


class SourceEqualsSink(GraphError):
    def __init__(self, vertex: int) -> None:
        self.vertex = vertex
        super().__init__(f"source and sink are the same vertex ({vertex})")


class DanglingVertexReference(GraphError):
    def __init__(self, vertex: object, vertex_count: int) -> None:
        self.vertex = vertex
        super().__init__(f"vertex {vertex!r} is outside 0..{vertex_count - 1}")


class NoStPath(GraphError):
    def __init__(self, source: int, sink: int) -> None:
        super().__init__(f"no path from source {source} to sink {sink}")


class VertexUnreachable(GraphError):
    def __init__(self, vertex: int) -> None:
        self.vertex = vertex
        super().__init__(f"vertex {vertex} is not reachable from the source")


class SourceHasNoNonbasicPath(GraphError):
    def __init__(self) -> None:
        super().__init__("the source vertex has no nonbasic path")


class LimitExceeded(LinsppError):
    """Enumeration would exceed a configured limit."""

    what = "items"

    def __init__(self, limit: int) -> None:
        self.limit = limit
        super().__init__(
            f"more than {limit} {self.what}; raise the limit or use a smaller instance"
        )


class TooManyPaths(LimitExceeded):
    what = "s-t paths"


class TooManySystems(LimitExceeded):
    what = "two-path systems"


# Cost functions


class CostError(LinsppError):
    """Cost function does not fit the graph or the requested order."""


class UnknownArc(CostError):
    def __init__(self, arc: int) -> None:
        self.arc = arc
        super().__init__(f"arc {arc} is not part of the digraph")


class OrderMismatch(CostError):
    def __init__(self, key: tuple[int, ...], order: int) -> None:
        self.key = key
        self.order = order
        super().__init__(f"cost key {key} has more than {order} arcs")


class DimensionMismatch(CostError):
    def __init__(self, expected: int, got: int) -> None:
        super().__init__(f"vector dimension {got} does not match {expected}")


# Algorithm preconditions and verdict plumbing


class LinearizationError(LinsppError):
    """An algorithm precondition does not hold."""


class NotStronglyBasic(LinearizationError):
    def __init__(self, arc: int) -> None:
        self.arc = arc
        super().__init__(f"arc {arc} is not strongly basic")


class PropertyPiViolated(LinearizationError):
    def __init__(self, arc: int) -> None:
        self.arc = arc
        super().__init__(f"arc value of {arc} depends on the chosen source path")


class NotLinearizable(LinearizationError):
    def __init__(self, message: str = "instance is not linearizable") -> None:
        super().__init__(message)


# Files, generators, configuration


class InstanceFormatError(LinsppError):
    """Malformed instance, cost or basis file."""


class ParseError(InstanceFormatError):
    def __init__(self, line: int, message: str) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}")


class DuplicateCostKey(InstanceFormatError):
    def __init__(self, line: int, key: tuple[int, ...]) -> None:
        self.line = line
        self.key = key
        super().__init__(f"line {line}: cost key {key} given twice")


class ArcIdOutOfRange(InstanceFormatError):
    def __init__(self, line: int, arc: int, arc_count: int) -> None:
        self.line = line
        self.arc = arc
        super().__init__(f"line {line}: arc id {arc} outside 1..{arc_count}")


class UnsupportedParams(LinsppError):
    """Generator parameters the requested family cannot honour."""


class ConfigError(LinsppError):
    """Invalid settings file or environment override."""
