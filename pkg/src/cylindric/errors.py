"""Exception types shared across the package."""


class CylindricError(Exception):
    pass


class TermSyntaxError(CylindricError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class IndexBoundsError(CylindricError, ValueError):
    pass


class DegreeMismatch(CylindricError, ValueError):
    pass


class PreconditionError(CylindricError, ValueError):
    pass


class BudgetExceeded(CylindricError):
    """Raised instead of starting an enumeration that cannot finish.

    ``size`` is a human readable (possibly symbolic) count of the objects the
    caller asked for; ``log2_size`` is its base-2 logarithm when that is
    itself representable, else None.
    """

    def __init__(self, message, size=None, log2_size=None):
        super().__init__(message)
        self.size = size
        self.log2_size = log2_size


class VerificationFailure(CylindricError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
