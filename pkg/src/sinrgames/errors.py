"""Exception types raised by the solvers."""


class NumericalFailure(RuntimeError):
    """A numerical routine did not reach its requested tolerance.

    Carries whatever diagnostic the routine had at the time of failure:
    an error estimate, an iterate trace, or a best-found result.
    """

    def __init__(self, message, *, estimate=None, trace=None, best=None):
        super().__init__(message)
        self.estimate = estimate
        self.trace = trace
        self.best = best


class QuadratureError(NumericalFailure):
    """Adaptive quadrature hit its subdivision cap."""


class DegenerateInput(ValueError):
    """Input lies on a degenerate configuration the routine does not handle."""
