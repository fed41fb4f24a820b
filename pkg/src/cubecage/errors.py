"""Exception hierarchy shared by the library and the command line."""


class CubeCageError(Exception):
    """Base class for all library errors."""


class InputError(CubeCageError, ValueError):
    """Malformed or out-of-contract input. The CLI maps this to exit code 2."""


class NotMedianError(InputError):
    """The supplied graph is not a median graph.

    ``triple`` holds a vertex triple without a unique median, when one is known.
    """

    def __init__(self, message: str, triple=None):
        super().__init__(message)
        self.triple = triple


class ResourceError(CubeCageError, RuntimeError):
    """A configured size cap was exceeded."""


class PreconditionError(CubeCageError):
    """An operation was called on data violating its precondition."""


class VerificationError(CubeCageError, AssertionError):
    """An internal invariant failed. The CLI maps this to exit code 1."""
