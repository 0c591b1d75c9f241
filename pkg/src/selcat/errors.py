"""Exception hierarchy shared by every module."""


class SelcatError(Exception):
    """Base class for all errors raised by the package."""


class InvalidInput(SelcatError, ValueError):
    """Input data fails a precondition of the construction it was passed to."""


class HorizonExceeded(SelcatError):
    """A search or lookup ran past the finite horizon.

    Raised instead of returning a silent ``False`` so that truncation is
    visible to callers.
    """


class OutOfWindow(HorizonExceeded):
    """A canonical index lies above the window of a hat-transformed set."""


class Pending(SelcatError):
    """A value needed for an answer has not been enumerated yet."""

    def __init__(self, message, items=()):
        super().__init__(message)
        self.items = tuple(items)


class ForcingViolated(SelcatError):
    """A string found during selector extraction lies in the bad-string set."""

    def __init__(self, message, sigma=None, index=None):
        super().__init__(message)
        self.sigma = sigma
        self.index = index


class BranchInapplicable(SelcatError):
    """Neither branch of a limit case split closes within the horizon."""
