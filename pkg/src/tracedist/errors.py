"""Exception types shared across the package."""


class TraceDistError(Exception):
    """Base class for all package-specific errors."""


class ShapeError(TraceDistError, ValueError):
    """Array dimensions are inconsistent with the declared mode count."""


class DomainError(TraceDistError, ValueError):
    """Input is outside the mathematical domain of the operation."""


class GaugeError(TraceDistError, ValueError):
    """A ket has (numerically) no vacuum component, so the phase gauge
    anchored on the vacuum amplitude cannot be applied.  Callers must
    supply an explicit phase reference instead."""


class DegeneracyError(TraceDistError, ArithmeticError):
    """A kernel matrix is numerically singular or an invariant that must
    be real carries a large imaginary residual."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class MetricInconsistencyError(TraceDistError, ArithmeticError):
    """A Gram/Hankel metric produced a significantly negative squared
    norm, which signals an upstream moment-computation error."""


class CostGuardError(TraceDistError, RuntimeError):
    """An exponential-cost moment computation exceeded the configured
    ceiling and was refused.  Raise the ceiling explicitly to proceed."""
