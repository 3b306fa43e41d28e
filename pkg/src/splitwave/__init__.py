"""Mixed and split finite elements for the 1D linear shallow-water equations."""

from splitwave.assembly import CyclicBandedMatrix, OperatorSet, apply, assemble_all, to_dense
from splitwave.cyclic_solver import Factorization, factorize, solve, solve_augmented
from splitwave.hodge import HodgePair, Projection
from splitwave.kernels import BACKEND
from splitwave.mesh import Mesh, nonuniform_periodic, uniform_periodic
from splitwave.params import GaussParams, PhysicalParams
from splitwave.schemes import SchemeSpec, Variant, make_pair, scheme_spec
from splitwave.timestepper import SolverConfig, cfl_number, integrate, step

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CyclicBandedMatrix", "Factorization", "GaussParams", "HodgePair",
    "Mesh", "OperatorSet", "PhysicalParams", "Projection", "SchemeSpec", "SolverConfig",
    "Variant", "apply", "assemble_all", "cfl_number", "factorize", "integrate",
    "make_pair", "nonuniform_periodic", "scheme_spec", "solve", "solve_augmented",
    "step", "to_dense", "uniform_periodic",
]
