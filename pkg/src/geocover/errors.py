"""Shared exception types."""


class GeometryError(ValueError):
    """Malformed geometric input: dimension mismatch, inverted box, overflow."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class InfeasibleError(RuntimeError):
    """A point cannot be covered / a box cannot be hit by the available input.

    Carries the offending entity so harness runs can report it.
    """

    def __init__(self, message, entity=None):
        super().__init__(message)
        self.entity = entity


class ParseError(ValueError):
    """Instance file rejected; carries the 1-based line number."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no
