"""Exception hierarchy shared by all belltest modules."""


class BellTestError(Exception):
    """Base class for every error raised by belltest."""


class RangeError(BellTestError, ValueError):
    """An index or value lies outside its admissible range."""


class ClassMismatchError(BellTestError, ValueError):
    """Objects built for different experiment classes were combined."""


class EmptyPairError(BellTestError, ValueError):
    """A setting pair has no recorded events."""

    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"setting pair {pair[0]}:{pair[1]} has zero total count")


class DegenerateInequalityError(BellTestError, ValueError):
    """The zero functional cannot be turned into an inequality."""


class DimensionError(BellTestError, ValueError):
    """Vector lengths do not match the ambient dimension."""


class CapacityError(BellTestError):
    """A configured enumeration or memory cap would be exceeded."""

    def __init__(self, message, cap=None):
        self.cap = cap
        super().__init__(message)


class InternalError(BellTestError):
    """A computed certificate failed its exact re-verification."""
