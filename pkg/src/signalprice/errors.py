"""Exception hierarchy shared by all solver modules."""


class SignalPriceError(Exception):
    """Base class for every error raised by this package."""


class InvalidInstance(SignalPriceError, ValueError):
    """Malformed auction instance, distribution, posterior or price vector."""


class InvalidScheme(SignalPriceError, ValueError):
    """A signaling scheme violates its normalization or labeling rules."""


class ZeroProbabilitySignal(SignalPriceError, ValueError):
    """Posterior requested for a signal that is never sent."""


class TooLarge(SignalPriceError):
    """An enumeration would exceed the configured cell cap."""


class InfeasiblePrior(SignalPriceError):
    """The prior is not a convex combination of the candidate posteriors."""


class InconsistentDistribution(SignalPriceError, ValueError):
    """A distribution over posteriors does not average to the prior."""


class InconsistentSolution(SignalPriceError):
    """An LP solution cannot be turned into a well-defined scheme."""


class NumericalFailure(SignalPriceError):
    """An iterative solver failed to converge or lost numerical stability."""
