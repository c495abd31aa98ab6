"""Exception types shared across the package."""


class FuzzyRegError(Exception):
    """Base class for all errors raised by fuzzyreg."""


class DomainError(FuzzyRegError, ValueError):
    """An argument lies outside the declared q-interval or intervals mismatch."""


class CapabilityError(FuzzyRegError, TypeError):
    """An operation was requested that the object cannot provide.

    Typical cases: differentiating a profile that only supports evaluation,
    or serializing a profile backed by an opaque callable.
    """


class StructureError(FuzzyRegError, ValueError):
    """Matrix or operator structure does not match what the operation needs.

    Examples: dimension mismatch, a non-unitary matrix passed where a unitary
    is required, a non-diagonal matrix fed into an entrywise diagonal map.
    """
