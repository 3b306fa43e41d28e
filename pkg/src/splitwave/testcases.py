"""Analytic test solutions and projection of initial data onto the FE spaces."""

import numpy as np

from splitwave.cyclic_solver import cached_factor, solve
from splitwave.params import DEFAULT_PARAMS, TC2_GAUSS, TC3_GAUSS
from splitwave.schemes import (
    P1P0State,
    P1P1State,
    SplitState,
    Variant,
    apply_closure,
    make_pair,
)

GAUSS_POINTS, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(5)


def tc1_eval(p, x, t):
    """Single sine wave: two counter-propagating halves."""
    x = np.asarray(x, dtype=float)
    k = 2.0 * np.pi / p.L
    right = np.sin(k * (x - p.c * t))
    left = np.sin(k * (x + p.c * t))
    h = p.H + 0.5 * p.dH * (right + left)
    u = p.c * p.dH / (2.0 * p.H) * (right - left)
    return h, u


def tc_gauss_eval(p, gp, x, t):
    """Periodic Gaussian bumps travelling in opposite directions."""
    x = np.asarray(x, dtype=float)

    def bump(shift):
        arg = gp.dw / (2.0 * np.pi) * np.sin(np.pi / p.L * (x + shift - gp.x_c))
        return np.exp(-arg ** 2)

    right, left = bump(-p.c * t), bump(p.c * t)
    h = p.H + 0.5 * p.dH * (right + left)
    u = p.c * p.dH / (2.0 * p.H) * (right - left)
    return h, u


def constant_eval(p, x, t, u0=0.0):
    x = np.asarray(x, dtype=float)
    return np.full_like(x, p.H), np.full_like(x, u0)


def testcase_fn(name, p=DEFAULT_PARAMS):
    """Return ``fn(x, t) -> (h, u)`` for ``tc1``, ``tc2``, ``tc3`` or ``constant``."""
    if name == "tc1":
        return lambda x, t: tc1_eval(p, x, t)
    if name == "tc2":
        return lambda x, t: tc_gauss_eval(p, TC2_GAUSS, x, t)
    if name == "tc3":
        return lambda x, t: tc_gauss_eval(p, TC3_GAUSS, x, t)
    if name == "constant":
        return lambda x, t: constant_eval(p, x, t)
    raise ValueError(f"unknown testcase {name!r}")


def quadrature_points(mesh):
    """Gauss points ``(n, 5)`` and weights ``(n, 5)`` on every element."""
    dx = mesh.elem_dx[:, None]
    xq = mesh.node_x[:, None] + 0.5 * dx * (GAUSS_POINTS[None, :] + 1.0)
    wq = 0.5 * dx * GAUSS_WEIGHTS[None, :]
    return xq, wq


def hat_values(mesh):
    """Values of the left/right hat functions of each element at its Gauss points."""
    right = 0.5 * (GAUSS_POINTS + 1.0)
    return 1.0 - right, right


def element_averages(mesh, f):
    xq, wq = quadrature_points(mesh)
    return (wq * f(xq)).sum(axis=1) / mesh.elem_dx


def l2_project_p1(ops, f):
    """Nodal coefficients of the L2 projection of ``f`` onto P1."""
    mesh = ops.mesh
    xq, wq = quadrature_points(mesh)
    left, right = hat_values(mesh)
    fw = wq * f(xq)
    load = (fw * left).sum(axis=1) + np.roll((fw * right).sum(axis=1), 1)
    return solve(cached_factor(ops, "m_nn"), load)


def project_initial(fn, spec, ops, pair=None):
    """Project ``fn(x) -> (h, u)`` into the spaces of ``spec``."""
    def h_of(x):
        return fn(x)[0]

    def u_of(x):
        return fn(x)[1]

    if spec.variant is Variant.P1P1:
        return P1P1State(l2_project_p1(ops, u_of), l2_project_p1(ops, h_of))
    if spec.variant is Variant.P1P0:
        return P1P0State(l2_project_p1(ops, u_of), element_averages(ops.mesh, h_of))
    pair = pair if pair is not None else make_pair(spec, ops)
    dx = ops.mesh.elem_dx
    n = ops.n
    state = SplitState(
        u_e1=element_averages(ops.mesh, u_of) * dx,
        h_n0=l2_project_p1(ops, h_of),
        ht_e1=np.zeros(n),
        ut_n0=np.zeros(n),
    )
    return apply_closure(pair, state)


def initial_state(testcase, spec, ops, pair=None, p=DEFAULT_PARAMS):
    f = testcase_fn(testcase, p)
    return project_initial(lambda x: f(x, 0.0), spec, ops, pair)
