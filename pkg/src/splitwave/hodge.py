"""Discrete Hodge stars between the straight and twisted spaces.

Elemental vectors hold integrated 1-form coefficients (value times element
width). Nodal vectors hold plain P1 coefficients.

========  ===========================  ===========================
tag       velocity star (u_e1 -> ũ)     height star (h -> h̃_e1)
========  ===========================  ===========================
GP1       M^nn^{-1} P^ne                P^ne^{-1} M^nn
GP0       M^en^{-1}                     M^en
========  ===========================  ===========================

Inverting ``P^ne`` or ``M^en`` goes through the bordered solve when the
mesh has an even number of elements.
"""

import enum
from dataclasses import dataclass, field

from splitwave.assembly import apply
from splitwave.cyclic_solver import cached_factor, solve, solve_auto


class Projection(str, enum.Enum):
    GP1 = "GP1"
    GP0 = "GP0"


class Accuracy(str, enum.Enum):
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"


@dataclass(frozen=True, eq=False)
class HodgePair:
    star_u: Projection
    star_h: Projection
    ops: object
    factor_m_nn: object = field(init=False, repr=False)
    factor_m_en: object = field(init=False, repr=False)
    factor_p_ne: object = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "star_u", Projection(self.star_u))
        object.__setattr__(self, "star_h", Projection(self.star_h))
        for name in ("m_nn", "m_en", "p_ne"):
            object.__setattr__(self, f"factor_{name}", cached_factor(self.ops, name))

    @property
    def accuracy(self):
        if self.star_u is self.star_h:
            return Accuracy.HIGH if self.star_u is Projection.GP1 else Accuracy.LOW
        return Accuracy.MEDIUM


def star_u_apply(pair, u_e1):
    """Map the elemental velocity 1-form to the nodal twisted 0-form."""
    if pair.star_u is Projection.GP1:
        return solve(pair.factor_m_nn, apply(pair.ops.p_ne, u_e1))
    return solve_auto(pair.factor_m_en, u_e1)


def star_h_apply(pair, h_n0):
    """Map the nodal height 0-form to the elemental twisted 1-form."""
    if pair.star_h is Projection.GP1:
        return solve_auto(pair.factor_p_ne, apply(pair.ops.m_nn, h_n0))
    return apply(pair.ops.m_en, h_n0)


def star_h_inverse_apply(pair, h_e1):
    """Recover the nodal height 0-form from the elemental twisted 1-form."""
    if pair.star_h is Projection.GP1:
        return solve(pair.factor_m_nn, apply(pair.ops.p_ne, h_e1))
    return solve_auto(pair.factor_m_en, h_e1)
