"""Exception types raised across the package."""


class SplitWaveError(Exception):
    """Base class for all package errors."""


class InvalidMeshError(SplitWaveError, ValueError):
    pass


class DimensionError(SplitWaveError, ValueError):
    pass


class UnsupportedKernelError(SplitWaveError):
    """The matrix is rank deficient by more than one."""


class KernelPresentError(SplitWaveError):
    """A plain solve was requested on a matrix with a detected kernel."""


class CFLViolationError(SplitWaveError):
    """The requested step exceeds the scheme's CFL threshold."""

    def __init__(self, mu, limit):
        super().__init__(f"CFL number {mu:.6g} exceeds limit {limit:.6g}")
        self.mu = mu
        self.limit = limit


class DivergedError(SplitWaveError):
    """The fixed-point iteration did not converge."""

    def __init__(self, iterations, residual):
        super().__init__(
            f"fixed-point iteration diverged after {iterations} iterations "
            f"(last update norm {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


class SingularityError(SplitWaveError, ValueError):
    """A dispersion relation was evaluated at a singular wave number."""


class NumericalFailureError(SplitWaveError):
    pass
