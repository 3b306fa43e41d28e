"""Physical and test-case parameters."""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalParams:
    g: float = 9.81
    H: float = 1000.0
    dH: float = 75.0
    L: float = 1000.0

    @property
    def c(self):
        return math.sqrt(self.g * self.H)

    @property
    def period(self):
        """Time for a wave to cross the domain once."""
        return self.L / self.c


@dataclass(frozen=True)
class GaussParams:
    dw: float = 40.0
    x_c: float = 500.0

    def __post_init__(self):
        if not self.dw > 0:
            raise ValueError("Gaussian width parameter must be positive")


DEFAULT_PARAMS = PhysicalParams()
TC2_GAUSS = GaussParams(dw=40.0, x_c=500.0)
TC3_GAUSS = GaussParams(dw=1000.0, x_c=500.0)
