"""Command-line drivers: time series, dispersion curves, convergence and conservation tables.

Configuration is a flat ``key = value`` file (``#`` starts a comment) whose
entries can be overridden on the command line, e.g.::

    splitwave run --config tc2.cfg --n 256 --t-end 5

Relative output paths are resolved against ``$SPLITWAVE_OUTPUT_DIR`` when it is
set; ``-`` writes to stdout. Exit codes: 0 success, 2 configuration error,
3 solver divergence (a partial CSV flagged with a ``#`` comment is written).
"""

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from splitwave.assembly import assemble_all
from splitwave.diagnostics import (
    conservation_records,
    drift,
    field_errors,
    l2_error,
    convergence_rate,
    error_fields,
)
from splitwave.dispersion import cd_analytic, cd_numeric, sample_grid
from splitwave.errors import DivergedError, SplitWaveError
from splitwave.mesh import uniform_periodic
from splitwave.params import DEFAULT_PARAMS
from splitwave.schemes import Variant, make_pair, scheme_spec
from splitwave.testcases import initial_state, testcase_fn
from splitwave.timestepper import SolverConfig, integrate, steps_for

OUTPUT_DIR_ENV = "SPLITWAVE_OUTPUT_DIR"
PUBLISHED_DT = 6.3102e-4
AUTO_FRACTION = 0.9
TESTCASES = ("tc1", "tc2", "tc3", "constant")
# errors below this fraction of the exact field's norm count as machine zero
RATE_FLOOR = 1e-10

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED = 0, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    scheme: str = "GP1GP0"
    n: int = 64
    testcase: str = "tc1"
    t_end: float = 1.0          # cycles of T = L / c
    dt: str = "auto"            # seconds, "auto" or "published"
    cfl: Optional[float] = None  # target CFL number; replaces the 90 % default of "auto"
    epsilon: Optional[float] = None
    max_iterations: int = 200
    output: Optional[str] = None
    stride: int = 1
    snapshot: Optional[str] = None
    n_list: str = "16,32,64,128"
    samples: int = 64
    variants: str = "all"
    jobs: int = 1

    def __post_init__(self):
        try:
            Variant(self.scheme)
        except ValueError:
            raise ConfigError(f"unknown scheme {self.scheme!r}") from None
        if self.testcase not in TESTCASES:
            raise ConfigError(f"unknown testcase {self.testcase!r}")
        if self.n < 3:
            raise ConfigError("n must be at least 3")
        if not self.t_end >= 0:
            raise ConfigError("t_end (cycles) must be non-negative")
        if self.dt not in ("auto", "published"):
            try:
                value = float(self.dt)
            except ValueError:
                raise ConfigError(f"dt must be seconds, 'auto' or 'published', got {self.dt!r}") from None
            if not value > 0 or not math.isfinite(value):
                raise ConfigError("dt must be positive")
        if self.cfl is not None and not self.cfl > 0:
            raise ConfigError("cfl must be positive")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ConfigError("epsilon must be positive")
        if self.max_iterations < 1 or self.stride < 0 or self.samples < 1 or self.jobs < 1:
            raise ConfigError("max_iterations, samples and jobs must be >= 1, stride >= 0")
        self.n_values()
        self.variant_list()

    def n_values(self):
        try:
            values = [int(v) for v in self.n_list.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"bad n_list {self.n_list!r}") from None
        if not values or min(values) < 3:
            raise ConfigError("n_list needs values >= 3")
        return values

    def variant_list(self):
        if self.variants == "all":
            return list(Variant)
        try:
            return [Variant(v.strip()) for v in self.variants.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key, raw):
    kind = _FIELD_TYPES[key]
    text = str(raw).strip()
    if kind in ("Optional[float]", "Optional[str]") or kind in (Optional[float], Optional[str]):
        if text.lower() in ("", "none"):
            return None
    try:
        if kind in (int, "int"):
            return int(text)
        if kind in (float, "float", Optional[float], "Optional[float]"):
            return float(text)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {text!r}") from None
    return text


def parse_config_text(text):
    """Parse ``key = value`` lines into a dict of raw strings."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_config(file_values=None, overrides=None):
    """Merge file values and overrides (later wins) into a validated :class:`RunConfig`."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    kwargs = {k: _coerce(k, v) for k, v in merged.items()}
    return RunConfig(**kwargs)


def resolve_output(path, default_name):
    """``None`` -> default name; relative paths go under ``$SPLITWAVE_OUTPUT_DIR``."""
    path = path or default_name
    if path == "-" or os.path.isabs(path):
        return path
    base = os.environ.get(OUTPUT_DIR_ENV)
    return os.path.join(base, path) if base else path


def time_step(cfg, spec, mesh, t_span, params=DEFAULT_PARAMS):
    """Return ``(steps, dt)`` covering ``t_span`` with a uniform step.

    ``auto`` picks the largest step not exceeding ``cfl`` (default 90 % of the
    scheme limit); ``published`` uses the fixed published steps; a number is taken
    as an upper bound in seconds. The step is shrunk so that ``t_span`` is an
    integer number of steps.
    """
    dx = float(np.min(mesh.elem_dx))
    if cfg.dt == "auto":
        mu = cfg.cfl if cfg.cfl is not None else AUTO_FRACTION * spec.cfl_limit
        dt_max = mu * dx / params.c
    elif cfg.dt == "published":
        dt_max = PUBLISHED_DT / 200 if spec.variant is Variant.GP0GP0 else PUBLISHED_DT
    else:
        dt_max = float(cfg.dt)
    if t_span == 0:
        return 0, dt_max
    return steps_for(t_span, dt_max)


def _fmt(value):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, str):
        return value
    return "%.16e" % float(value)


def write_csv(path, header, rows, comments=()):
    """Write rows with 17 significant digits; returns the text written."""
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row[h]) for h in header])
    text = buf.getvalue()
    if path == "-":
        sys.stdout.write(text)
    else:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def _setup(cfg, scheme, n, params=DEFAULT_PARAMS):
    mesh = uniform_periodic(n, params.L)
    ops = assemble_all(mesh)
    spec = scheme_spec(scheme, n)
    pair = make_pair(spec, ops)
    state = initial_state(cfg.testcase, spec, ops, pair, params)
    return mesh, ops, spec, pair, state


def _solver_config(cfg, dt):
    return SolverConfig(dt, epsilon=cfg.epsilon, max_iterations=cfg.max_iterations)


# --------------------------------------------------------------------------- run

def cmd_run(cfg, params=DEFAULT_PARAMS):
    """Time series of relative conservation errors; returns ``(exit code, csv text)``."""
    mesh, ops, spec, pair, state = _setup(cfg, cfg.scheme, cfg.n, params)
    t_span = cfg.t_end * params.period
    steps, dt = time_step(cfg, spec, mesh, t_span, params)
    reference = conservation_records(state, spec, ops)

    def observer(s):
        row = {}
        for rep, (dm, dp) in drift(reference, conservation_records(s, spec, ops), params).items():
            row[f"mass_rel_err_{rep}"] = dm
            row[f"momentum_rel_err_{rep}"] = dp
        return row

    header = ["t", "iterations"] + sorted(observer(state))
    path = resolve_output(cfg.output, f"run_{cfg.scheme}_{cfg.testcase}_n{cfg.n}.csv")
    comments = []
    code = EXIT_OK
    if steps == 0:
        log = [dict(t=state.t, iterations=0, **observer(state))]
        final = state
    else:
        try:
            final, log = integrate(spec, ops, pair, state, _solver_config(cfg, dt), t_span,
                                   observers=(observer,), stride=cfg.stride, params=params)
        except DivergedError as exc:
            log, final = exc.partial_log, exc.last_state
            comments.append(f"DIVERGED at t={final.t!r}: {exc}")
            code = EXIT_DIVERGED
    text = write_csv(path, header, log, comments)
    if cfg.snapshot:
        write_snapshot(resolve_output(cfg.snapshot, "snapshot.csv"), final, spec, ops)
    return code, text


def write_snapshot(path, state, spec, ops):
    """Long-format dump ``field, x, value`` of every field at its own locations."""
    mesh = ops.mesh
    rows = []
    for name, (space, coeffs, _) in error_fields(state, spec, ops).items():
        xs = mesh.node_x if space == "P1" else mesh.elem_center_x
        rows.extend({"field": name, "x": x, "value": v} for x, v in zip(xs, coeffs))
    return write_csv(path, ["field", "x", "value"], rows, [f"t={state.t!r}"])


# ------------------------------------------------------------------- dispersion

def dispersion_rows(variants, samples):
    """Analytic and numeric ``c_d / c`` on ``samples`` points of ``(0, pi)``.

    The split symbols are singular at ``pi`` itself; GP0GP0 blows up before
    that, so its grid is ``(0, 0.98 pi]``.
    """
    rows = []
    for variant in variants:
        variant = Variant(variant)
        if variant is Variant.GP0GP0:
            grid = sample_grid(samples, 0.98 * np.pi)
        else:
            grid = sample_grid(samples, np.pi, include_end=False)
        for k in grid:
            rows.append({
                "variant": variant.value,
                "k_dx": float(k),
                "c_ratio_analytic": cd_analytic(variant, k),
                "c_ratio_numeric": cd_numeric(variant, k),
            })
    return rows


def cmd_dispersion(cfg):
    rows = dispersion_rows(cfg.variant_list(), cfg.samples)
    path = resolve_output(cfg.output, "dispersion.csv")
    return EXIT_OK, write_csv(path, ["variant", "k_dx", "c_ratio_analytic", "c_ratio_numeric"], rows)


# ------------------------------------------------------------------ convergence

def _convergence_point(cfg, n, params=DEFAULT_PARAMS):
    """Errors of one resolution; top level so it can run in a worker process."""
    mesh, ops, spec, pair, state = _setup(cfg, cfg.scheme, n, params)
    t_span = cfg.t_end * params.period
    steps, dt = time_step(cfg, spec, mesh, t_span, params)
    if steps:
        state, _ = integrate(spec, ops, pair, state, _solver_config(cfg, dt), t_span,
                             stride=max(steps, 1), params=params)
    exact = testcase_fn(cfg.testcase, params)
    errors = field_errors(state, spec, ops, exact, t_span)
    floors = {}
    for name, (space, _, comp) in error_fields(state, spec, ops).items():
        zero = np.zeros(n)
        # norm of the exact field; errors below a tiny fraction are round-off
        norm = l2_error(zero, space, mesh, lambda x, c=comp: exact(x, t_span)[c])
        floors[name] = RATE_FLOOR * max(norm, 1.0)
    return {"n": n, "dt": dt, "steps": steps, "errors": errors, "floors": floors}


def convergence_rows(cfg, params=DEFAULT_PARAMS):
    n_values = cfg.n_values()
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            points = list(pool.map(_convergence_point, [cfg] * len(n_values), n_values))
    else:
        points = [_convergence_point(cfg, n, params) for n in n_values]
    names = list(points[0]["errors"])
    rows = [{"n": p["n"], "dt": p["dt"], "steps": p["steps"]} for p in points]
    for name in names:
        errs = [p["errors"][name] for p in points]
        floor = max(p["floors"][name] for p in points)
        rates = [math.nan] + convergence_rate(errs, n_values, floor)
        for row, err, rate in zip(rows, errs, rates):
            row[f"err_{name}"] = err
            row[f"rate_{name}"] = rate
    header = ["n", "dt", "steps"] + [f"{kind}_{name}" for name in names for kind in ("err", "rate")]
    return header, rows


def cmd_convergence(cfg, params=DEFAULT_PARAMS):
    header, rows = convergence_rows(cfg, params)
    path = resolve_output(cfg.output, f"convergence_{cfg.scheme}_{cfg.testcase}.csv")
    return EXIT_OK, write_csv(path, header, rows)


# ------------------------------------------------------------------- conserve

def cmd_conserve(cfg, params=DEFAULT_PARAMS):
    """Final relative mass/momentum drift per scheme and representation."""
    rows = []
    code = EXIT_OK
    comments = []
    t_span = cfg.t_end * params.period
    for variant in cfg.variant_list():
        mesh, ops, spec, pair, state = _setup(cfg, variant, cfg.n, params)
        steps, dt = time_step(cfg, spec, mesh, t_span, params)
        reference = conservation_records(state, spec, ops)
        if steps:
            try:
                state, _ = integrate(spec, ops, pair, state, _solver_config(cfg, dt), t_span,
                                     stride=steps, params=params)
            except DivergedError as exc:
                comments.append(f"DIVERGED {variant.value}: {exc}")
                code = EXIT_DIVERGED
                continue
        for rep, (dm, dp) in drift(reference, conservation_records(state, spec, ops), params).items():
            rows.append({
                "variant": variant.value, "representation": rep, "n": cfg.n,
                "dt": dt, "steps": steps, "t": state.t,
                "mass_rel_err": dm, "momentum_rel_err": dp,
            })
    header = ["variant", "representation", "n", "dt", "steps", "t", "mass_rel_err", "momentum_rel_err"]
    path = resolve_output(cfg.output, f"conserve_{cfg.testcase}_n{cfg.n}.csv")
    return code, write_csv(path, header, rows, comments)


COMMANDS = {
    "run": cmd_run,
    "dispersion": cmd_dispersion,
    "convergence": cmd_convergence,
    "conserve": cmd_conserve,
}

# per-command defaults applied before the config file
COMMAND_DEFAULTS = {
    "conserve": {"testcase": "tc2", "t_end": "5"},
    "convergence": {"t_end": "0.875"},
}


def build_parser():
    parser = argparse.ArgumentParser(prog="splitwave", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value configuration file")
        p.add_argument("--paper-dt", action="store_true",
                       help="use the published time steps (6.3102e-4 s, /200 for GP0GP0)")
        for key in _FIELD_TYPES:
            p.add_argument("--" + key.replace("_", "-"), dest=key, default=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        file_values = dict(COMMAND_DEFAULTS.get(args.command, {}))
        if args.config:
            with open(args.config) as fh:
                file_values.update(parse_config_text(fh.read()))
        overrides = {k: getattr(args, k) for k in _FIELD_TYPES}
        if args.paper_dt:
            overrides["dt"] = "published"
        cfg = build_config(file_values, overrides)
        code, _ = COMMANDS[args.command](cfg)
    except (ConfigError, OSError) as exc:
        print(f"splitwave: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergedError as exc:
        print(f"splitwave: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except SplitWaveError as exc:
        # CFL refusals and mesh errors are caused by the configuration
        print(f"splitwave: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if code == EXIT_DIVERGED:
        print("splitwave: solver diverged; partial output flagged", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
