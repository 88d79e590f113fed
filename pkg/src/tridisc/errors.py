"""Exception types shared across the package."""


class TridiscError(Exception):
    """Base class for all package errors."""


class DomainError(TridiscError, ValueError):
    """An input violates a precondition (outside the disc, zero triple, ...)."""


class SingularityError(TridiscError, ZeroDivisionError):
    """A rational expression was evaluated too close to a pole."""


class DegenerateDataError(DomainError):
    """Geometric data is degenerate: coincident or collinear nodes, etc."""


class ConvergenceError(TridiscError, RuntimeError):
    """An iterative solver failed to reach its tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SamplerStarvation(TridiscError, RuntimeError):
    """Rejection sampling accepted too few candidates."""
