"""Exception types raised across the package."""


class HierMotifError(Exception):
    pass


class CapacityExceeded(HierMotifError):
    """Requested graph exceeds the configured node cap."""


class DomainError(HierMotifError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class MalformedMatrix(HierMotifError, ValueError):
    """Matrix rows are not probability vectors."""


class UnsupportedLevel(HierMotifError, ValueError):
    """Brute-force enumeration requested at an unsupported level."""


class TooManySlots(HierMotifError, ValueError):
    """Exhaustive enumeration over too many decoration slots."""
