"""Exception hierarchy shared by every module of the package."""


class FixpointError(Exception):
    """Base class for all errors raised by ``opm_fixpoint``."""


class SpaceError(FixpointError):
    """Structurally malformed space (empty, duplicate labels, bad matrix shape)."""


class PointError(FixpointError):
    """A point does not belong to the space it was used with."""


class MapError(FixpointError):
    """A coupled map is incomplete, ill-typed, or leaves its domain."""


class ExprSyntaxError(FixpointError):
    """Raised by the expression parser; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ExprEvalError(FixpointError):
    """Raised when an expression cannot be evaluated, e.g. division by zero."""


class StartConditionError(FixpointError):
    """The initial pair does not satisfy x0 <= F(x0, y0) and y0 >= F(y0, x0)."""

    def __init__(self, message, failed):
        super().__init__(message)
        self.failed = failed


class TraceError(FixpointError):
    """An iteration trace is too short for the requested diagnostic."""


class GenerationError(FixpointError):
    """The random instance generator could not realize a valid instance."""
