"""Compare the compiled and pure-Python kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--sizes 64,1024,16384] [--repeat 5]

Reports the best-of-``repeat`` wall time per call of the two hot kernels
(cyclic matvec, Thomas back-substitution) and of a full CN step of GP1GP0 on
TC1, the latter run in a subprocess per backend so that the backend is
selected at import time exactly as in normal use.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from splitwave import kernels

STEP_SNIPPET = """
import timeit
from splitwave import kernels
from splitwave.assembly import assemble_all
from splitwave.mesh import uniform_periodic
from splitwave.params import DEFAULT_PARAMS as P
from splitwave.schemes import make_pair, scheme_spec
from splitwave.testcases import initial_state
from splitwave.timestepper import SolverConfig, step
n = {n}
mesh = uniform_periodic(n, P.L); ops = assemble_all(mesh)
spec = scheme_spec("GP1GP0", n); pair = make_pair(spec, ops)
state = initial_state("tc1", spec, ops, pair)
cfg = SolverConfig(0.5 * spec.cfl_limit * mesh.elem_dx[0] / P.c)
step(spec, ops, pair, state, cfg)
t = min(timeit.repeat(lambda: step(spec, ops, pair, state, cfg), number=1, repeat={repeat}))
print(kernels.BACKEND, t)
"""


def bench_kernels(sizes, repeat):
    rng = np.random.default_rng(0)
    impls = kernels.backends()
    print(f"{'kernel':<14}{'n':>8}" + "".join(f"{name:>14}" for name in impls) + f"{'speedup':>10}")
    for n in sizes:
        lower, upper = rng.normal(size=n), rng.normal(size=n)
        diag = np.abs(lower) + np.abs(upper) + 1.0
        v = rng.normal(size=n)
        cp, inv_den = kernels.thomas_factor(lower, diag, upper, 1e-13)
        for label, call in (
            ("matvec", lambda m: m.cyclic_matvec(lower, diag, upper, v)),
            ("thomas", lambda m: m.thomas_solve(lower, cp, inv_den, v)),
        ):
            times = {}
            for name, mod in impls.items():
                number = max(1, 20000 // n)
                times[name] = min(timeit.repeat(lambda: call(mod), number=number, repeat=repeat)) / number
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{label:<14}{n:>8}" + "".join(f"{t * 1e6:>12.2f}us" for t in times.values())
                  + f"{speed:>9.1f}x")


def bench_step(sizes, repeat):
    print("\nfull CN step, GP1GP0 / TC1 (subprocess per backend)")
    for n in sizes:
        results = {}
        for backend in kernels.backends():
            env = dict(os.environ, SPLITWAVE_KERNELS=backend)
            out = subprocess.run([sys.executable, "-c", STEP_SNIPPET.format(n=n, repeat=repeat)],
                                 env=env, capture_output=True, text=True, check=True)
            name, t = out.stdout.split()
            results[name] = float(t)
        line = "  ".join(f"{k}={v * 1e3:.3f}ms" for k, v in results.items())
        if "cython" in results:
            line += f"  speedup {results['python'] / results['cython']:.1f}x"
        print(f"n={n:>6}  {line}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="64,1024,16384")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"active backend: {kernels.BACKEND}; available: {', '.join(kernels.backends())}\n")
    bench_kernels(sizes, args.repeat)
    bench_step(sizes, args.repeat)


if __name__ == "__main__":
    main()
