"""Exception hierarchy shared by all modules."""


class MQError(Exception):
    """Base class for all errors raised by mquandle."""


class StructureError(MQError, ValueError):
    """Input is malformed independently of any algebraic axiom (bad shape, out-of-range entry)."""


class ParseError(MQError, ValueError):
    """Text input does not match its grammar."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


class InvalidQuandleError(MQError):
    """Tables are well-formed but violate a multi-quandle axiom."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ClosureError(MQError, ValueError):
    """A braid cannot be closed to a colored link, or two braids have mismatched color interfaces."""


class DiagramError(MQError, ValueError):
    """A diagram violates its incidence invariants."""


class MoveError(MQError, ValueError):
    """A Reidemeister move was requested at an illegal site."""
