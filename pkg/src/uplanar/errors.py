"""Exception hierarchy shared by every module of the package."""


class UplanarError(Exception):
    """Base class for all package errors."""


class ParseError(UplanarError):
    pass


class NotPartialTwoTree(UplanarError):
    """The underlying graph has a K4 minor (an R-node would be required)."""


class DisconnectedInput(UplanarError):
    pass


class IsolatedVertex(UplanarError):
    pass


class UnknownEdge(UplanarError):
    pass


class OutOfBound(UplanarError):
    """A shape's left turn number exceeds the bound of its universal set."""


class EmptySequence(UplanarError):
    pass


class CapExceeded(UplanarError):
    pass


class PoleOrderMismatch(UplanarError):
    pass


class MissingLabels(UplanarError):
    pass


class Mismatch(UplanarError):
    """Algorithm and oracle disagree (raised by the differential harness)."""
