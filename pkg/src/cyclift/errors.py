"""Exception types shared across the package."""


class DomainError(ValueError):
    """A caller violated a documented precondition (bad dimensions, a set
    that is not a facet, an interval that cannot hold the polytope, ...)."""


class InternalError(RuntimeError):
    """An invariant that the library itself is responsible for was broken.
    Seeing this is always a bug, never a usage error."""
