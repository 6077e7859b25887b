"""Truncation and precision policy for series and contour evaluations."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ValidationError


@dataclass(frozen=True)
class SeriesPolicy:
    """Controls how infinite series and Mellin-Barnes contours are truncated.

    Attributes
    ----------
    rel_tol:
        Target relative accuracy of the summed value.
    abs_tol:
        Absolute floor below which contributions are considered zero.
    max_terms:
        Hard cap on the number of series terms (or contour cells).  An
        evaluation either converges within this budget or raises
        :class:`~billiardstats.errors.NonConvergenceError`; results are never
        silently truncated.
    working_precision_bits:
        Baseline precision of the accumulation.  53 selects ordinary double
        (with 80-bit extended accumulation where the platform offers it);
        evaluators may raise the precision internally when an alternating
        series is detected to cancel catastrophically.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_terms: int = 10_000
    working_precision_bits: int = 53

    def __post_init__(self):
        if not (self.rel_tol > 0.0):
            raise ValidationError("rel_tol must be positive")
        if not (self.abs_tol >= 0.0):
            raise ValidationError("abs_tol must be nonnegative")
        if self.max_terms < 1:
            raise ValidationError("max_terms must be at least 1")
        if self.working_precision_bits < 24:
            raise ValidationError("working_precision_bits must be at least 24")

    def with_max_terms(self, max_terms: int) -> "SeriesPolicy":
        return replace(self, max_terms=max_terms)


DEFAULT_POLICY = SeriesPolicy()
