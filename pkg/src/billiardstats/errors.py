"""Exception hierarchy shared by all billiardstats modules.

Every failure mode that callers are expected to handle programmatically gets
its own class; the CLI maps them onto exit codes (2 for validation problems,
3 for numerical non-convergence).
"""

from __future__ import annotations


class BilliardStatsError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(BilliardStatsError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(ValidationError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """A special function was evaluated exactly at one of its poles."""


class OutsideDomainError(ValidationError):
    """A point lies outside the billiard domain it was evaluated on."""


class UnsupportedShapeError(ValidationError):
    """The operation is defined only for a different billiard shape."""


class NoClosedFormError(BilliardStatsError, LookupError):
    """No closed-form expression is implemented for the requested state."""


class SingularPointError(BilliardStatsError, ArithmeticError):
    """The probability density diverges exactly at the requested amplitude.

    Raised instead of returning ``inf`` so that downstream consumers (CLI,
    plotting pipelines) must handle the singular point explicitly.
    """

    def __init__(self, psi: float, message: str | None = None):
        self.psi = psi
        super().__init__(message or f"density diverges at amplitude {psi!r}")


class NonConvergenceError(BilliardStatsError, RuntimeError):
    """A series or quadrature failed to converge within its budget."""

    def __init__(self, message: str, *, evaluations: int | None = None,
                 error_estimate: float | None = None):
        self.evaluations = evaluations
        self.error_estimate = error_estimate
        super().__init__(message)


class CancellationOverflowError(NonConvergenceError):
    """Intermediate series terms exceeded the cancellation guard and no
    higher-precision fallback was permitted."""
