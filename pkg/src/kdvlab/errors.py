"""Exception hierarchy shared by all kdvlab modules."""


class KdvLabError(Exception):
    """Base class for every error raised by this package."""


class ContractViolation(KdvLabError, ValueError):
    """Input does not satisfy an operation's precondition."""


class MeanNotZero(ContractViolation):
    """A field that must be mean-zero carries a nonzero mean mode."""


class OutOfCutoff(ContractViolation):
    """A frequency lies above the cutoff N(eps)."""


class WindowClipped(ContractViolation):
    """The time window support is not covered by the sampled times."""


class TemporalAliasing(ContractViolation):
    """The temporal sampling cannot resolve the phases present in a field."""


class SolutionBlowup(KdvLabError, FloatingPointError):
    """Non-finite values appeared during time stepping.

    ``last_good_time`` is the last time at which the state was finite.
    """

    def __init__(self, message, last_good_time):
        super().__init__(message)
        self.last_good_time = last_good_time


class QuadratureFailure(KdvLabError, RuntimeError):
    """Adaptive quadrature did not reach the requested accuracy."""


class FitError(KdvLabError, ValueError):
    """A log-log rate fit cannot be performed."""


class ZeroError(FitError):
    """At least one error value is zero or negative."""


class DegenerateFit(FitError):
    """The abscissae do not determine a slope."""
