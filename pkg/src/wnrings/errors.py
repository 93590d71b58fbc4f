"""Exception hierarchy shared by every subpackage."""


class WnError(Exception):
    """Base class for all errors raised by wnrings."""


class ParseError(WnError):
    """Malformed input text; carries the character offset of the problem."""

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class FieldMismatchError(WnError):
    pass


class PreconditionError(WnError):
    pass


class ConsistencyError(WnError):
    """Two independent computations disagreed. Always a bug, never user error."""


class NotModularError(WnError):
    pass


class SizeBoundError(WnError):
    pass
