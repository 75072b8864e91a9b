"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """A documented precondition of an operation was violated."""


class GenerationFailure(RuntimeError):
    """A rejection-sampling generator exhausted its retry budget."""


class CapExceeded(RuntimeError):
    """The brute-force oracle refused an instance above its size cap."""


class InternalError(RuntimeError):
    """A pipeline invariant was breached; indicates a bug, not bad input."""


class ParseError(ValueError):
    """Malformed graph file; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message
