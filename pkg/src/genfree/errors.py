"""Exception hierarchy shared by every module."""


class GenfreeError(Exception):
    """Base class for library errors."""


class InputError(GenfreeError, ValueError):
    """Malformed or out-of-contract input (bad generator, empty set, ...)."""


class ModelMismatch(InputError):
    pass


class RangeExceeded(GenfreeError):
    """An operation needs elements beyond the enumerated/computable radius."""

    def __init__(self, message, needed=None, available=None):
        super().__init__(message)
        self.needed = needed
        self.available = available


class BudgetExceeded(GenfreeError):
    """A search or enumeration budget tripped before a definite answer.

    Predicates raise this instead of answering False, so that densities can
    count the element as unknown.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ConstructionFailure(GenfreeError):
    """The admissible-path construction could not be completed."""

    def __init__(self, message, segment=None):
        super().__init__(message)
        self.segment = segment


class UndefinedGrowth(GenfreeError, ValueError):
    """Growth rate of an empty (all-zero) series."""
