"""Exception hierarchy shared by every holofloer module."""


class HolofloerError(Exception):
    """Base class for errors raised by this package."""


class DomainError(HolofloerError, ValueError):
    """An argument lies outside the domain of an operation."""


class FormatError(HolofloerError, ValueError):
    """Input data is malformed or violates a structural invariant."""


class StructuralError(HolofloerError, ValueError):
    """A map or complex is not well formed (e.g. a bad cone matching)."""


class IndexRangeError(HolofloerError, IndexError):
    """A sequence was evaluated below its start index."""


class InvariantViolation(HolofloerError, RuntimeError):
    """An internal invariant failed; indicates bad knot data or a bug."""
