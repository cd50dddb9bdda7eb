"""Exception hierarchy shared by every module."""

from __future__ import annotations


class MhbcError(Exception):
    """Base class for all library errors."""


class InputError(MhbcError, ValueError):
    """Bad user input: unparsable graphs, unknown vertices, invalid parameters."""


class ParseError(InputError):
    def __init__(self, lineno: int, message: str) -> None:
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class MalformedLine(ParseError):
    pass


class NonPositiveWeight(ParseError):
    pass


class SelfLoop(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass


class EmptyGraph(InputError):
    pass


class VertexNotFound(InputError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "vertex not found"


class DisconnectedGraph(InputError):
    def __init__(self, component_sizes: list[int]) -> None:
        self.component_sizes = component_sizes
        super().__init__(
            f"graph has {len(component_sizes)} connected components of sizes {component_sizes}"
        )


class SigmaOverflow(MhbcError, OverflowError):
    """A shortest-path count no longer fits in an unsigned 64-bit integer."""


class AllZeroDependency(MhbcError):
    """No source has a positive dependency on the target(s); BC is exactly 0."""


class EmptyStratum(MhbcError):
    """A joint-chain stratum M(r) has no samples, so the estimate is undefined."""


class ZeroDenominator(MhbcError, ZeroDivisionError):
    pass


class ZeroBetweenness(MhbcError):
    pass


class TooLarge(InputError):
    """Graph exceeds a hard size guard of an exhaustive oracle."""


class GeneratorError(InputError):
    pass
