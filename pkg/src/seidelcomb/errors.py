"""Exception hierarchy.

Errors that indicate a bad *input* (a non-generic point, a vector outside a
coset, a missing lift) derive from :class:`DomainError`; the CLI maps them to
exit code 2.  :class:`SpecError` is a usage error (exit code 1).
"""


class SeidelCombError(Exception):
    pass


class SpecError(SeidelCombError, ValueError):
    """Malformed root-system string or invalid index set."""


class SizeError(SeidelCombError):
    """An enumeration would exceed its configured cap."""


class InternalError(SeidelCombError, AssertionError):
    """A consistency check that the theory guarantees has failed."""


class DomainError(SeidelCombError, ValueError):
    """Input outside the domain of an operation."""


class NotGenericError(DomainError):
    """A point lies on a wall, or a segment is not nice."""


class LatticeError(DomainError):
    """A lattice containment precondition does not hold."""


class CosetError(DomainError):
    pass


class LiftError(DomainError):
    pass
