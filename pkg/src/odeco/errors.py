"""Exception and warning types shared across the package."""


class OdecoError(Exception):
    """Base class for errors raised by this package."""


class ShapeError(OdecoError, ValueError):
    """Array has the wrong shape, order, or dimension for the operation."""


class DataError(OdecoError, ValueError):
    """Array contents are invalid: non-finite entries, asymmetry beyond
    tolerance, bad norms, or malformed serialized payloads."""


class FeasibilityError(OdecoError, RuntimeError):
    """The constraint projection could not produce a feasible unit vector."""


class UnsupportedSizeError(OdecoError, ValueError):
    """Problem size is outside the supported range for this operation."""


class AdaptiveSearchError(OdecoError, RuntimeError):
    """The adaptive overlap-threshold search shrank past its floor without
    finding an acceptable component."""

    def __init__(self, step, theta, floor):
        self.step = step
        self.theta = theta
        self.floor = floor
        super().__init__(
            f"step {step}: overlap threshold {theta:.3e} fell below the "
            f"floor {floor:.3e} without an acceptable component"
        )


class DecompositionError(OdecoError, RuntimeError):
    """A rank-one subproblem failed inside a decomposition loop.

    Carries the zero-based step index at which the failure occurred; the
    original solver error is attached as ``__cause__``.
    """

    def __init__(self, step, message):
        self.step = step
        super().__init__(f"step {step}: {message}")


class ConvergenceWarning(UserWarning):
    """A solve returned its best iterate without meeting the stationarity
    tolerance."""
