"""Exception types shared across the package."""

__all__ = [
    "SuitaLabError",
    "DimensionError",
    "OutsideDomainError",
    "UnboundedDomainError",
    "PoleError",
    "DegenerateLeviFormError",
    "CapabilityError",
    "HypothesisError",
    "ConvergenceWarning",
]


class SuitaLabError(Exception):
    """Base class for all package errors."""


class DimensionError(SuitaLabError, ValueError):
    """A point has the wrong number of complex coordinates."""


class OutsideDomainError(SuitaLabError, ValueError):
    """A point lies outside the domain an operation requires."""


class UnboundedDomainError(SuitaLabError, ValueError):
    """A bounded-domain quantity was requested for an unbounded domain."""


class PoleError(SuitaLabError, ZeroDivisionError):
    """A holomorphic map was evaluated at one of its poles."""


class DegenerateLeviFormError(SuitaLabError, ValueError):
    """The boundary point is not strongly pseudoconvex."""


class CapabilityError(SuitaLabError):
    """No oracle is available for the requested combination.

    The message lists what *is* available so callers (and the CLI) can
    surface it verbatim.
    """


class HypothesisError(SuitaLabError, ValueError):
    """Parameters violate the hypotheses of a bound or formula."""


class ConvergenceWarning(UserWarning):
    """A truncated series or iterative procedure did not reach tolerance."""
