"""Discrete dispersion relations of the six schemes.

All ratios are ``c_d / sqrt(gH)`` evaluated with ``g = H = dx = 1``; they are
scale free. ``cd_analytic`` evaluates the closed forms, ``cd_numeric`` finds
the frequencies of the plane-wave symbol ``i*omega*A + B`` by eigenvalues, so
the two are independent routes to the same curve.

Near ``k dx = pi`` the trigonometric factors are evaluated through the
reflection ``sin(x) = sin(pi - x)`` so that the grid-scale values come out
exact (``sin`` of the rounded ``pi`` is not zero).
"""

from dataclasses import dataclass

import numpy as np

from splitwave.errors import NumericalFailureError, SingularityError
from splitwave.hodge import Projection
from splitwave.schemes import Variant

CONTINUOUS = "continuous"

P1P1_FAMILY = (Variant.P1P1, Variant.GP1GP1)
P1P0_FAMILY = (Variant.P1P0, Variant.GP1GP0, Variant.GP0GP1)


@dataclass(frozen=True)
class DispersionSample:
    variant: str
    k_dx: float
    c_ratio: float
    branch: int = 1
    method: str = "analytic"


def _sin(x):
    x = np.asarray(x, dtype=float)
    return np.where(x > np.pi / 2, np.sin(np.pi - x), np.sin(x))


def _cos_half(x):
    """``cos(x / 2)``, exact zero at ``x = pi``."""
    x = np.asarray(x, dtype=float)
    return np.where(x > np.pi / 2, np.sin(0.5 * (np.pi - x)), np.cos(0.5 * x))


def _check_k(k_dx):
    k = np.asarray(k_dx, dtype=float)
    if np.any(k <= 0) or np.any(k > np.pi):
        raise ValueError("k_dx must lie in (0, pi]")
    return k


def _resolve(variant):
    if variant == CONTINUOUS or variant is None:
        return CONTINUOUS
    return Variant(variant)


def _scalar_or_array(value, like):
    return float(value) if np.ndim(like) == 0 else value


def cd_analytic(variant, k_dx):
    """Closed-form ``c_d / c`` of ``variant`` (or ``"continuous"``) at ``k_dx``."""
    variant = _resolve(variant)
    k = _check_k(k_dx)
    half = 0.5 * k
    if variant == CONTINUOUS:
        out = np.ones_like(k)
    elif variant is Variant.P1P1:
        out = _sin(k) / k * 3.0 / (2.0 + np.cos(k))
    elif variant is Variant.GP1GP1:
        out = _sin(half) / half * 3.0 * _cos_half(k) / (2.0 + np.cos(k))
    elif variant in P1P0_FAMILY:
        out = _sin(half) / half * np.sqrt(3.0 / (2.0 + np.cos(k)))
    else:
        if np.any(k == np.pi):
            raise SingularityError("GP0GP0 phase speed is unbounded at k dx = pi")
        out = _sin(half) / _cos_half(k) / half
    return _scalar_or_array(out, k_dx)


def symbol_matrix(variant, k_dx):
    """Plane-wave symbol ``(A, B)`` with ``i*omega*A + B`` annihilating the mode.

    Unknown ordering is ``(u, h)`` for the mixed schemes and
    ``(u, h, ũ, h̃)`` for the split schemes.
    """
    variant = Variant(variant)
    k = float(_check_k(k_dx))
    mass = (2.0 + np.cos(k)) / 3.0
    if variant is Variant.P1P1:
        s = 1j * float(_sin(k))
        return np.diag([mass, mass]).astype(complex), np.array([[0, s], [s, 0]], dtype=complex)
    s2 = 2j * float(_sin(0.5 * k))
    if variant is Variant.P1P0:
        return np.diag([mass, 1.0]).astype(complex), np.array([[0, s2], [s2, 0]], dtype=complex)

    ch = float(_cos_half(k))
    A = np.zeros((4, 4), dtype=complex)
    A[0, 0] = 1.0
    A[1, 3] = 1.0
    B = np.zeros((4, 4), dtype=complex)
    B[0, 1] = s2
    B[1, 2] = s2
    star_u, star_h = variant.hodge_tags
    if star_u is Projection.GP1:
        B[2, 0], B[2, 2] = -ch, mass
    else:
        B[2, 0], B[2, 2] = 1.0, -ch
    if star_h is Projection.GP1:
        B[3, 1], B[3, 3] = mass, -ch
    else:
        B[3, 1], B[3, 3] = -ch, 1.0
    return A, B


def frequencies(variant, k_dx):
    """All frequencies ``omega`` (with ``dx = c = 1``) of the reduced symbol."""
    variant = Variant(variant)
    A, B = symbol_matrix(variant, k_dx)
    if variant.is_split:
        dyn_rows, dyn_cols = [0, 1], [0, 3]
        cl_rows, cl_cols = [2, 3], [1, 2]
        b_cc = B[np.ix_(cl_rows, cl_cols)]
        if abs(np.linalg.det(b_cc)) < 1e-14:
            # a Hodge-star symbol vanishes (k dx = pi): the closure cannot be inverted
            raise SingularityError(f"{variant.value} closure is singular at k dx = {float(k_dx)!r}")
        schur = B[np.ix_(dyn_rows, dyn_cols)] - B[np.ix_(dyn_rows, cl_cols)] @ np.linalg.solve(
            b_cc, B[np.ix_(cl_rows, dyn_cols)]
        )
        a_dd = A[np.ix_(dyn_rows, dyn_cols)]
    else:
        schur, a_dd = B, A
    # i omega a_dd v + schur v = 0  =>  omega v = i a_dd^{-1} schur v
    return np.linalg.eigvals(1j * np.linalg.solve(a_dd, schur))


def cd_numeric(variant, k_dx):
    """``c_d / c`` from the symbol eigenvalues (nonnegative branch)."""
    omega = frequencies(variant, k_dx)
    scale = max(1.0, float(np.max(np.abs(omega))))
    if np.max(np.abs(omega.imag)) > 1e-9 * scale:
        raise NumericalFailureError(f"complex frequencies {omega}")
    return float(np.max(omega.real)) / float(k_dx)


def dispersion_curve(variant, k_values, method="analytic"):
    fn = cd_analytic if method == "analytic" else cd_numeric
    name = variant if variant == CONTINUOUS else Variant(variant).value
    return [DispersionSample(name, float(k), float(fn(variant, k)), 1, method) for k in k_values]


def sample_grid(samples, k_max=np.pi, include_end=True):
    """``samples`` equispaced wave numbers in ``(0, k_max]`` (or ``(0, k_max)``)."""
    if include_end:
        return k_max * np.arange(1, samples + 1) / samples
    return k_max * np.arange(1, samples + 1) / (samples + 1)
