"""Exception hierarchy.

Validation errors carry the offending cell so reports and CLI messages can
name it.  Conditions that are results rather than failures (flag violations,
cover defects, search exhaustion) are returned as data, not raised.
"""

from __future__ import annotations


class CubeCoverError(Exception):
    """Base class for every error raised by the library."""


class ValidationError(CubeCoverError):
    def __init__(self, message: str, cell: str | None = None):
        self.cell = cell
        super().__init__(f"{cell}: {message}" if cell else message)


class DanglingReference(ValidationError):
    pass


class NonInvolutiveReversal(ValidationError):
    pass


class OpenSquareBoundary(ValidationError):
    pass


class InconsistentCubeFaces(ValidationError):
    pass


class DimensionLimit(ValidationError):
    pass


class NotInduced(CubeCoverError):
    """A vertex bijection of Kneser complexes is not induced by a set bijection."""


class LinkMismatch(CubeCoverError):
    def __init__(self, vertex: int, reason: str):
        self.vertex = vertex
        self.reason = reason
        super().__init__(f"link at 0-cube {vertex} is not isomorphic to L: {reason}")


class NotCoCubical(CubeCoverError):
    pass


class NotMinimal(CubeCoverError):
    pass


class NotClean(CubeCoverError):
    pass


class AlreadyTwoSided(CubeCoverError):
    pass


class RecoveryFailed(CubeCoverError):
    pass


class IllDefined(CubeCoverError):
    def __init__(self, square: int, message: str = ""):
        self.square = square
        super().__init__(f"square {square}: {message or 'boundary holonomy is not the identity'}")


class NontrivialParallelHolonomy(CubeCoverError):
    def __init__(self, hyperplane: int, side: int, loop: list[int] | None = None):
        self.hyperplane = hyperplane
        self.side = side
        self.loop = loop or []
        super().__init__(
            f"hyperplane {hyperplane} side {side:+d} has nontrivial parallel holonomy"
            + (f" (loop {self.loop})" if self.loop else "")
        )


class PathDisconnected(CubeCoverError):
    pass


class UnverifiedCover(CubeCoverError):
    pass


class Disconnected(CubeCoverError):
    pass


class NonLiftableSquare(CubeCoverError):
    def __init__(self, square: int):
        self.square = square
        super().__init__(f"square {square}: boundary gain product is not the identity")


class BadInvolutions(CubeCoverError):
    pass


class NonCommutingAdjacents(CubeCoverError):
    pass


class NotFlat(CubeCoverError):
    def __init__(self, loop: list[int]):
        self.loop = loop
        super().__init__(f"Delta-category is not flat; witness loop {loop}")


class ColorSchemeMismatch(CubeCoverError):
    pass


class EmptyProduct(CubeCoverError):
    pass


class Obstruction(CubeCoverError):
    """The common-cover pipeline stopped at a named stage."""

    def __init__(self, stage: str, which: int, detail: str):
        self.stage = stage
        self.which = which
        self.detail = detail
        super().__init__(f"input {which}: {stage}: {detail}")


class ParseError(CubeCoverError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class UnknownCommand(CubeCoverError):
    pass
