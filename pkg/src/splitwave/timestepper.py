"""Crank-Nicolson stepping solved by fixed-point iteration.

Each step iterates on the implicit CN equations with the previous state as
initial guess. For the split schemes one sweep is: project ``u_e1 -> ũ``,
update ``h̃_e1``, recover ``h`` through the inverse height star, update
``u_e1``. The mixed schemes use the same two-field ordering (height first).
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from splitwave.assembly import apply
from splitwave.errors import CFLViolationError, DivergedError
from splitwave.hodge import star_h_inverse_apply, star_u_apply
from splitwave.params import DEFAULT_PARAMS
from splitwave.cyclic_solver import cached_factor, solve
from splitwave.schemes import Variant

CFL_SLACK = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    """``epsilon=None`` selects ``1e-12 * (|u|_inf + |h|_inf + 1)`` per step."""

    dt: float
    epsilon: Optional[float] = None
    max_iterations: int = 200
    check_cfl: bool = True
    norm: str = "max"

    def __post_init__(self):
        if not self.dt != 0 or not math.isfinite(self.dt):
            raise ValueError("dt must be finite and nonzero")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.norm != "max":
            raise ValueError("only the discrete max-norm is supported")

    def reversed(self):
        return replace(self, dt=-self.dt)


@dataclass(frozen=True)
class StepInfo:
    iterations: int
    residual: float


def cfl_number(g, H, dt, dx):
    return math.sqrt(g * H) * dt / dx


def _norm(v):
    return float(np.max(np.abs(v)))


def _tolerance(cfg, a, b):
    if cfg.epsilon is not None:
        return cfg.epsilon
    return 1e-12 * (_norm(a) + _norm(b) + 1.0)


def _iterate(sweep, a0, b0, tol, max_iterations):
    """Run ``(a, b) <- sweep(a)`` until the summed max-norm update drops below ``tol``."""
    a, b = a0, b0
    residual = math.inf
    for k in range(1, max_iterations + 1):
        b_new, a_new = sweep(a)
        residual = _norm(a_new - a) + _norm(b_new - b)
        a, b = a_new, b_new
        if not math.isfinite(residual):
            raise DivergedError(k, residual)
        if residual < tol:
            return a, b, StepInfo(k, residual)
    raise DivergedError(max_iterations, residual)


def _mixed_operators(variant, ops, params):
    """Return ``(du(h), dh(u))`` for the mixed schemes as closures."""
    m_nn = cached_factor(ops, "m_nn")
    if variant is Variant.P1P1:
        def du(h):
            return -params.g * solve(m_nn, apply(ops.d_nn, h))

        def dh(u):
            return -params.H * solve(m_nn, apply(ops.d_nn, u))
    else:
        m_ee = cached_factor(ops, "m_ee")

        def du(h):
            return params.g * solve(m_nn, apply(ops.d_ne, h))

        def dh(u):
            return -params.H * solve(m_ee, apply(ops.d_en, u))
    return du, dh


def _step_mixed(spec, ops, state, cfg, params):
    half = 0.5 * cfg.dt
    du, dh = _mixed_operators(spec.variant, ops, params)
    u_t, h_t = (getattr(state, name) for name in state.FIELDS)
    f_u = u_t + half * du(h_t)
    d_h = h_t + half * dh(u_t)

    def sweep(u_k):
        h_new = d_h + half * dh(u_k)
        return h_new, f_u + half * du(h_new)

    u, h, info = _iterate(sweep, u_t, h_t, _tolerance(cfg, u_t, h_t), cfg.max_iterations)
    return type(state)(u, h, t=state.t + cfg.dt), info


def _step_split(ops, pair, state, cfg, params):
    half = 0.5 * cfg.dt
    d_en = ops.d_en
    d_t = state.ht_e1 - half * params.H * apply(d_en, state.ut_n0)
    f_t = state.u_e1 - half * params.g * apply(d_en, state.h_n0)

    def sweep(u_k):
        ut_k = star_u_apply(pair, u_k)
        ht_new = d_t - half * params.H * apply(d_en, ut_k)
        h_new = star_h_inverse_apply(pair, ht_new)
        return ht_new, f_t - half * params.g * apply(d_en, h_new)

    u, ht, info = _iterate(sweep, state.u_e1, state.ht_e1,
                           _tolerance(cfg, state.u_e1, state.ht_e1), cfg.max_iterations)
    new = replace(
        state,
        u_e1=u,
        ht_e1=ht,
        ut_n0=star_u_apply(pair, u),
        h_n0=star_h_inverse_apply(pair, ht),
        t=state.t + cfg.dt,
    )
    return new, info


def check_cfl(spec, ops, cfg, params=DEFAULT_PARAMS):
    mu = cfl_number(params.g, params.H, abs(cfg.dt), float(np.min(ops.mesh.elem_dx)))
    if mu > spec.cfl_limit * (1 + CFL_SLACK):
        raise CFLViolationError(mu, spec.cfl_limit)
    return mu


def step(spec, ops, pair, state, cfg, params=DEFAULT_PARAMS, return_info=False):
    """Advance ``state`` by ``cfg.dt`` (negative ``dt`` steps backwards)."""
    if cfg.check_cfl:
        check_cfl(spec, ops, cfg, params)
    if not spec.is_split:
        new, info = _step_mixed(spec, ops, state, cfg, params)
    else:
        if pair is None:
            raise ValueError(f"{spec.variant.value} needs a HodgePair")
        new, info = _step_split(ops, pair, state, cfg, params)
    return (new, info) if return_info else new


def integrate(spec, ops, pair, state, cfg, t_end, observers=(), stride=0,
              params=DEFAULT_PARAMS):
    """Step from ``state.t`` to ``t_end`` with fixed ``cfg.dt``.

    ``observers`` are callables ``obs(state) -> dict``; their merged output is
    logged for the initial state, every ``stride`` steps (every step when
    ``stride`` is 0) and for the final state. The last step is shortened to
    land exactly on ``t_end``.
    """
    if t_end < state.t:
        raise ValueError("t_end precedes the current time")
    if cfg.dt <= 0:
        raise ValueError("integrate needs a positive dt")

    def observe(s, iterations):
        row = {"t": s.t, "iterations": iterations}
        for obs in observers:
            row.update(obs(s))
        return row

    log = [observe(state, 0)]
    t0 = state.t
    span = t_end - t0
    if span == 0:
        return state, log
    n_steps = max(1, math.ceil(span / cfg.dt - 1e-9))
    every = max(1, stride)
    for k in range(1, n_steps + 1):
        last = k == n_steps
        step_cfg = replace(cfg, dt=t_end - state.t) if last else cfg
        try:
            state, info = step(spec, ops, pair, state, step_cfg, params, return_info=True)
        except DivergedError as exc:
            # let callers flush what was observed before the failure
            exc.partial_log = log
            exc.last_state = state
            raise
        state = replace(state, t=t_end if last else t0 + k * cfg.dt)
        if k % every == 0 or last:
            log.append(observe(state, info.iterations))
    return state, log


def steps_for(t_span, dt_max):
    """Smallest step count whose uniform step does not exceed ``dt_max``."""
    n = max(1, math.ceil(t_span / dt_max - 1e-12))
    return n, t_span / n
