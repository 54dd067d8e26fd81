"""Exception hierarchy for the package."""

from __future__ import annotations


class PgfMetricsError(Exception):
    """Base class for all library errors."""


class DomainError(PgfMetricsError):
    """An argument is outside its documented range."""


class NegativeMass(PgfMetricsError):
    """A probability entry is negative beyond rounding tolerance."""


class NotNormalized(PgfMetricsError):
    """Probabilities do not sum to one within tolerance."""


class GenerationFailed(PgfMetricsError):
    """A randomized generator exhausted its retry budget."""


class UnsupportedOrder(PgfMetricsError):
    """Metric order outside {1, 2}."""


class EmptyVector(PgfMetricsError):
    """A vector argument has length zero."""


class UnequalMeans(PgfMetricsError):
    """An operation requiring equal means received distributions whose means differ."""


class DegenerateDistance(PgfMetricsError):
    """Order-2 distance is (numerically) zero while the transport distance is not.

    This combination would contradict the compact-support comparison bound, so
    it is escalated instead of being skipped.
    """


class IntegrationError(PgfMetricsError):
    """Mean-field integration aborted; carries the abort time and magnitude."""

    def __init__(self, message: str, t: float, magnitude: float):
        super().__init__(f"{message} at t={t:.6g} (magnitude {magnitude:.3e})")
        self.t = t
        self.magnitude = magnitude


class MassLeak(IntegrationError):
    """Total mass drifted beyond tolerance during integration."""


class NegativeProbability(IntegrationError):
    """A state entry went negative beyond tolerance during integration."""


class MeanDrift(IntegrationError):
    """The conserved mean drifted beyond tolerance during integration."""


class InsufficientSamples(PgfMetricsError):
    """Too few trajectory samples inside the requested fit window."""


class MetricUnderflow(PgfMetricsError):
    """Too few usable (positive, above-floor) metric values in the fit window."""
