"""Shared exception types."""


class ParseError(ValueError):
    """Raised when textual input (coordinates, map specs) cannot be parsed."""


class PreconditionError(ValueError):
    """Raised when an operation's documented precondition is violated."""


class OracleError(RuntimeError):
    """Raised when an oracle cannot produce a trustworthy answer."""
