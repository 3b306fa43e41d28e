"""Semi-discrete P1-P1, P1-P0 and split schemes.

Signs follow the physical equations ``u_t + g h_x = 0``, ``h_t + H u_x = 0``.
With the assembled operators, ``D^nn h`` and ``-D^ne h_e`` both approximate
``dx * h_x`` and ``D^en h`` is the exact difference across each element.
"""

import enum
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

from splitwave.assembly import apply
from splitwave.cyclic_solver import cached_factor, solve
from splitwave.hodge import HodgePair, Projection, star_h_apply, star_u_apply
from splitwave.params import DEFAULT_PARAMS


class Variant(str, enum.Enum):
    P1P1 = "P1P1"
    P1P0 = "P1P0"
    GP1GP1 = "GP1GP1"
    GP1GP0 = "GP1GP0"
    GP0GP1 = "GP0GP1"
    GP0GP0 = "GP0GP0"

    @property
    def is_split(self):
        return self.value.startswith("GP")

    @property
    def hodge_tags(self):
        if not self.is_split:
            return None
        return Projection(self.value[:3]), Projection(self.value[3:])


@dataclass(frozen=True)
class SchemeSpec:
    variant: Variant
    cfl_limit: float
    hodge_tags: Optional[tuple] = None

    @property
    def is_split(self):
        return self.variant.is_split


def scheme_spec(variant, n):
    """Build the :class:`SchemeSpec` of ``variant`` on a mesh of ``n`` elements."""
    variant = Variant(variant)
    if variant in (Variant.P1P1, Variant.GP1GP1):
        limit = 1.15
    elif variant is Variant.GP0GP0:
        limit = 1.15 / (n / 2)
    else:
        limit = 0.57
    return SchemeSpec(variant, limit, variant.hodge_tags)


def make_pair(spec, ops):
    if not spec.is_split:
        return None
    star_u, star_h = spec.hodge_tags
    return HodgePair(star_u, star_h, ops)


class _StateMixin:
    FIELDS: tuple = ()

    def field_values(self):
        return {name: getattr(self, name) for name in self.FIELDS}

    def as_vector(self):
        return np.concatenate([np.asarray(getattr(self, name)) for name in self.FIELDS])

    @classmethod
    def from_vector(cls, vec, t=0.0):
        parts = np.split(np.asarray(vec), len(cls.FIELDS))
        return cls(*parts, t=t)

    def with_fields(self, **kw):
        return replace(self, **kw)

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self.t == other.t and all(
            np.array_equal(getattr(self, f.name), getattr(other, f.name))
            for f in fields(self) if f.name != "t"
        )


@dataclass(eq=False)
class P1P1State(_StateMixin):
    u_n: np.ndarray
    h_n: np.ndarray
    t: float = 0.0
    FIELDS = ("u_n", "h_n")


@dataclass(eq=False)
class P1P0State(_StateMixin):
    u_n: np.ndarray
    h_e: np.ndarray   # pointwise element values
    t: float = 0.0
    FIELDS = ("u_n", "h_e")


@dataclass(eq=False)
class SplitState(_StateMixin):
    u_e1: np.ndarray    # integrated velocity 1-form, u_m * dx_m
    h_n0: np.ndarray    # nodal height 0-form
    ht_e1: np.ndarray   # integrated twisted height 1-form, h_m * dx_m
    ut_n0: np.ndarray   # nodal twisted velocity 0-form
    t: float = 0.0
    FIELDS = ("u_e1", "h_n0", "ht_e1", "ut_n0")


STATE_TYPES = {
    Variant.P1P1: P1P1State,
    Variant.P1P0: P1P0State,
}


def state_type(variant):
    return STATE_TYPES.get(Variant(variant), SplitState)


def zero_state(spec, n, t=0.0):
    cls = state_type(spec.variant)
    return cls(*(np.zeros(n) for _ in cls.FIELDS), t=t)


def tendency_p1p1(ops, state, params=DEFAULT_PARAMS):
    m_nn = cached_factor(ops, "m_nn")
    du = -params.g * solve(m_nn, apply(ops.d_nn, state.h_n))
    dh = -params.H * solve(m_nn, apply(ops.d_nn, state.u_n))
    return du, dh


def tendency_p1p0(ops, state, params=DEFAULT_PARAMS):
    # integration by parts moves the sign: M du - g D^ne h = 0
    du = params.g * solve(cached_factor(ops, "m_nn"), apply(ops.d_ne, state.h_e))
    dh = -params.H * solve(cached_factor(ops, "m_ee"), apply(ops.d_en, state.u_n))
    return du, dh


def split_topological_tendency(ops, state, params=DEFAULT_PARAMS):
    """Metric-free tendencies of the split system: no mass matrix involved."""
    du_e1 = -params.g * apply(ops.d_en, state.h_n0)
    dht_e1 = -params.H * apply(ops.d_en, state.ut_n0)
    return du_e1, dht_e1


def apply_closure(pair, state):
    """Refresh the twisted fields from ``u_e1`` and ``h_n0``."""
    return replace(
        state,
        ut_n0=star_u_apply(pair, state.u_e1),
        ht_e1=star_h_apply(pair, state.h_n0),
    )


def tendency(spec, ops, state, params=DEFAULT_PARAMS):
    """Dispatch to the tendency of ``spec.variant``; returns a pair of arrays."""
    if spec.variant is Variant.P1P1:
        return tendency_p1p1(ops, state, params)
    if spec.variant is Variant.P1P0:
        return tendency_p1p0(ops, state, params)
    return split_topological_tendency(ops, state, params)
