"""Exception hierarchy shared across the toolkit."""


class DissipaqError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatchError(DissipaqError):
    """Vector or state dimensions disagree with the system specification."""


class OverdampedError(DissipaqError):
    """Damping rate too large for an oscillatory normal mode (gamma^2 >= curvature)."""


class EquilibriumSearchError(DissipaqError):
    """Newton search for a potential equilibrium failed to converge."""


class ConvexityError(DissipaqError):
    """Dissipation profile W has a non positive-semidefinite Hessian at a queried point."""


class BranchTrackingError(DissipaqError):
    """Complex square-root branch could not be followed continuously along the integration path."""


class NumericalFailureError(DissipaqError):
    """A numerical procedure (eigensolver, linear solve, relaxation) failed.

    ``last_iterate`` carries the most recent state when a fixed-point or
    descent iteration is the failing procedure.
    """

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class BlowUpError(NumericalFailureError):
    """Time integration produced a non-finite state; ``blow_up_time`` is the first bad time."""

    def __init__(self, message, blow_up_time):
        super().__init__(message)
        self.blow_up_time = blow_up_time


class NoInstantonError(NumericalFailureError):
    """Relaxation collapsed to the trivial constant path: no instanton found."""


class ConfigError(DissipaqError):
    """Invalid run configuration (bad key, malformed value, violated precondition)."""
