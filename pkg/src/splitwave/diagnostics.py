"""Mass and momentum functionals, L2 errors and convergence rates."""

import math
from dataclasses import dataclass

import numpy as np

from splitwave.assembly import apply
from splitwave.schemes import Variant
from splitwave.testcases import hat_values, quadrature_points

PIECEWISE_CONSTANT = "piecewise_constant"
PIECEWISE_LINEAR = "piecewise_linear"


@dataclass(frozen=True)
class ConservationRecord:
    t: float
    mass: float
    momentum: float
    representation: str


def representations(spec):
    if spec.is_split:
        return (PIECEWISE_CONSTANT, PIECEWISE_LINEAR)
    if spec.variant is Variant.P1P1:
        return (PIECEWISE_LINEAR,)
    return (PIECEWISE_CONSTANT,)


def mass(state, spec, ops, representation=None):
    """Integral of the height field.

    Split schemes default to the elemental twisted height, whose entries are
    already integrated; ``representation="piecewise_linear"`` integrates the
    nodal height instead.
    """
    if spec.variant is Variant.P1P1:
        return float(np.sum(apply(ops.m_nn, state.h_n)))
    if spec.variant is Variant.P1P0:
        return float(np.dot(state.h_e, ops.mesh.elem_dx))
    if representation in (None, PIECEWISE_CONSTANT):
        return float(np.sum(state.ht_e1))
    return float(np.sum(apply(ops.m_nn, state.h_n0)))


def momentum(state, spec, ops, representation=None):
    """Integral of ``h * u``, integrated exactly element by element."""
    if spec.variant is Variant.P1P1:
        return float(np.dot(state.h_n, apply(ops.m_nn, state.u_n)))
    if spec.variant is Variant.P1P0:
        # int_m u = dx_m (u_m + u_{m+1}) / 2, i.e. the rows of M^en
        return float(np.dot(state.h_e, apply(ops.m_en, state.u_n)))
    if representation in (None, PIECEWISE_CONSTANT):
        return float(np.sum(state.u_e1 * state.ht_e1 / ops.mesh.elem_dx))
    return float(np.dot(state.h_n0, apply(ops.m_nn, state.ut_n0)))


def conservation_records(state, spec, ops):
    return [
        ConservationRecord(state.t, mass(state, spec, ops, rep), momentum(state, spec, ops, rep), rep)
        for rep in representations(spec)
    ]


def relative_error(value, reference, scale=0.0):
    """``|value - reference| / max(|reference|, scale)``.

    ``scale`` guards quantities whose initial value vanishes, e.g. the momentum
    of data starting at rest (TC2 has ``p(0) = 0`` exactly).
    """
    denom = max(abs(reference), scale)
    if denom == 0.0:
        return 0.0 if value == reference else math.inf
    return abs(value - reference) / denom


def momentum_scale(mass0, params):
    """Momentum magnitude ``m(0) * c``; the floor for relative momentum drift."""
    return abs(mass0) * params.c


def drift(records0, records1, params):
    """``{representation: (mass drift, momentum drift)}`` between two record lists.

    Momentum drift is measured against ``max(|p(0)|, m(0) c)`` so that data
    with zero initial momentum still yields a meaningful relative number.
    """
    out = {}
    for a, b in zip(records0, records1):
        scale = momentum_scale(a.mass, params)
        out[a.representation] = (
            relative_error(b.mass, a.mass),
            relative_error(b.momentum, a.momentum, scale),
        )
    return out


def evaluate_field(coeffs, space, mesh):
    """Values ``(n, 5)`` of a P0 or P1 field at the element Gauss points."""
    coeffs = np.asarray(coeffs, dtype=float)
    if space == "P0":
        return np.repeat(coeffs[:, None], len(hat_values(mesh)[0]), axis=1)
    left, right = hat_values(mesh)
    return coeffs[:, None] * left[None, :] + np.roll(coeffs, -1)[:, None] * right[None, :]


def l2_error(coeffs, space, mesh, fn):
    """``|field - fn|_L2`` with 5-point Gauss quadrature on every element.

    ``coeffs`` are pointwise coefficients: nodal values for ``"P1"``, element
    values for ``"P0"``. ``fn`` maps positions to exact values.
    """
    xq, wq = quadrature_points(mesh)
    diff = evaluate_field(coeffs, space, mesh) - fn(xq)
    return math.sqrt(float(np.sum(wq * diff ** 2)))


def error_fields(state, spec, ops):
    """``{name: (space, pointwise coefficients, exact-solution component)}``.

    The component index selects ``h`` (0) or ``u`` (1) from the analytic
    solution.
    """
    if spec.variant is Variant.P1P1:
        return {"u": ("P1", state.u_n, 1), "h": ("P1", state.h_n, 0)}
    if spec.variant is Variant.P1P0:
        return {"u": ("P1", state.u_n, 1), "h": ("P0", state.h_e, 0)}
    dx = ops.mesh.elem_dx
    return {
        "u": ("P0", state.u_e1 / dx, 1),
        "ut": ("P1", state.ut_n0, 1),
        "h": ("P1", state.h_n0, 0),
        "ht": ("P0", state.ht_e1 / dx, 0),
    }


def field_errors(state, spec, ops, exact, t=None):
    """L2 error of every field in ``error_fields`` against ``exact(x, t)``."""
    t = state.t if t is None else t
    out = {}
    for name, (space, coeffs, comp) in error_fields(state, spec, ops).items():
        out[name] = l2_error(coeffs, space, ops.mesh, lambda x, c=comp: exact(x, t)[c])
    return out


def convergence_rate(errors, n_values, floor=0.0):
    """Observed orders ``log2(e_i / e_{i+1})`` between successive dyadic meshes."""
    if len(errors) != len(n_values):
        raise ValueError("errors and n_values differ in length")
    for a, b in zip(n_values, n_values[1:]):
        if b != 2 * a:
            raise ValueError(f"n_values must double at each refinement, got {a} -> {b}")
    rates = []
    for a, b in zip(errors, errors[1:]):
        if a > floor and b > floor and math.isfinite(a) and math.isfinite(b):
            rates.append(math.log2(a / b))
        else:
            rates.append(math.nan)
    return rates
