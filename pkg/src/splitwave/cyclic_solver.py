"""Direct O(N) solvers for cyclic tridiagonal systems.

The matrix is split as::

    A = [[A11, c],
         [r^T, a]]

with ``A11`` the leading ``(N-1) x (N-1)`` block, which is tridiagonal without
wrap and is LU-factorised by a Thomas sweep. The cyclic wrap only enters the
border ``c``/``r``, so a solve costs one sweep plus a Schur-complement
correction with the scalar ``s = a - r^T A11^{-1} c``.

``s == 0`` (to tolerance) means ``A`` has a one-dimensional kernel spanned by
``[-A11^{-1} c, 1]``. This happens for ``P^ne`` and ``M^en`` with an even
number of elements; such systems are solved in bordered form by
:func:`solve_augmented`.
"""

import weakref
from dataclasses import dataclass

import numpy as np

from splitwave import kernels
from splitwave.assembly import to_dense
from splitwave.errors import (
    DimensionError,
    KernelPresentError,
    NumericalFailureError,
    SplitWaveError,
    UnsupportedKernelError,
)

PIVOT_TOL = 1e-13
KERNEL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Factorization:
    label: str
    n: int
    norm_inf: float
    lower: np.ndarray      # bands of A11 for the Thomas sweeps
    cp: np.ndarray
    inv_den: np.ndarray
    col: np.ndarray        # c, length N-1
    row: np.ndarray        # r, length N-1
    corner: float
    w: np.ndarray          # A11^{-1} c
    schur: float
    detected_kernel: np.ndarray | None = None
    v: np.ndarray | None = None   # A11^{-1} K0[:-1], only with a kernel

    @property
    def has_kernel(self):
        return self.detected_kernel is not None

    def _inner(self, rhs):
        return kernels.thomas_solve(self.lower, self.cp, self.inv_den, rhs)


def factorize(matrix):
    """Factorise a :class:`~splitwave.assembly.CyclicBandedMatrix`."""
    n = matrix.n
    norm = matrix.norm_inf()
    if norm == 0.0:
        raise UnsupportedKernelError(f"{matrix.label or 'matrix'} is zero")

    lower = np.ascontiguousarray(matrix.lower[: n - 1])
    diag = matrix.diag[: n - 1]
    upper = matrix.upper[: n - 1]
    factors = kernels.thomas_factor(lower, diag, upper, PIVOT_TOL * norm)
    if factors is None:
        _raise_for_singular_block(matrix)
    cp, inv_den = factors

    col = np.zeros(n - 1)
    col[0] += matrix.lower[0]
    col[n - 2] += matrix.upper[n - 2]
    row = np.zeros(n - 1)
    row[0] += matrix.upper[n - 1]
    row[n - 2] += matrix.lower[n - 1]
    corner = float(matrix.diag[n - 1])

    w = kernels.thomas_solve(lower, cp, inv_den, col)
    schur = corner - float(row @ w)

    kernel = None
    v = None
    null = np.append(-w, 1.0)
    null_norm = float(np.linalg.norm(null))
    if abs(schur) / null_norm <= KERNEL_TOL * norm:
        kernel = null / null_norm
        # fix the sign so the first nonzero entry is positive
        lead = kernel[np.flatnonzero(np.abs(kernel) > 1e-300)[0]]
        kernel = kernel if lead > 0 else -kernel
        kernel.setflags(write=False)
        v = kernels.thomas_solve(lower, cp, inv_den, np.ascontiguousarray(kernel[:-1]))

    return Factorization(
        label=matrix.label, n=n, norm_inf=norm, lower=lower, cp=cp, inv_den=inv_den,
        col=col, row=row, corner=corner, w=w, schur=schur,
        detected_kernel=kernel, v=v,
    )


def _raise_for_singular_block(matrix):
    sv = np.linalg.svd(to_dense(matrix), compute_uv=False)
    deficiency = int(np.sum(sv <= 1e-10 * sv[0]))
    if deficiency >= 2:
        raise UnsupportedKernelError(
            f"{matrix.label or 'matrix'} has a {deficiency}-dimensional kernel"
        )
    raise NumericalFailureError(
        f"leading block of {matrix.label or 'matrix'} is singular; cannot factorise"
    )


def _check_rhs(f, rhs):
    rhs = np.asarray(rhs)
    if rhs.shape != (f.n,):
        raise DimensionError(f"rhs of shape {rhs.shape} does not match n={f.n}")
    return rhs


def solve(f, rhs):
    """Solve ``A x = rhs`` for a kernel-free factorisation."""
    rhs = _check_rhs(f, rhs)
    if f.has_kernel:
        raise KernelPresentError(f"{f.label or 'matrix'} has a kernel; use solve_augmented")
    if np.iscomplexobj(rhs):
        return solve(f, rhs.real) + 1j * solve(f, rhs.imag)
    rhs = np.asarray(rhs, dtype=float)
    y = f._inner(np.ascontiguousarray(rhs[:-1]))
    x_last = (rhs[-1] - f.row @ y) / f.schur
    out = np.empty(f.n)
    out[:-1] = y - f.w * x_last
    out[-1] = x_last
    return out


def solve_augmented(f, rhs, return_multiplier=False):
    """Solve the bordered system ``[[A, K0], [K0^T, 0]] [x, lam] = [rhs, 0]``.

    ``x`` is orthogonal to the kernel and ``A x = rhs - lam K0``; ``lam`` is
    zero exactly when ``rhs`` lies in the range of ``A``.
    """
    rhs = _check_rhs(f, rhs)
    if not f.has_kernel:
        raise SplitWaveError(f"{f.label or 'matrix'} has no kernel; use solve")
    if np.iscomplexobj(rhs):
        xr, lr = solve_augmented(f, rhs.real, True)
        xi, li = solve_augmented(f, rhs.imag, True)
        x, lam = xr + 1j * xi, lr + 1j * li
        return (x, lam) if return_multiplier else x
    rhs = np.asarray(rhs, dtype=float)
    k1, kn = f.detected_kernel[:-1], f.detected_kernel[-1]
    y = f._inner(np.ascontiguousarray(rhs[:-1]))
    system = np.array([
        [f.schur, kn - f.row @ f.v],
        [kn - k1 @ f.w, -(k1 @ f.v)],
    ])
    x_last, lam = np.linalg.solve(system, [rhs[-1] - f.row @ y, -(k1 @ y)])
    out = np.empty(f.n)
    out[:-1] = y - f.w * x_last - f.v * lam
    out[-1] = x_last
    return (out, float(lam)) if return_multiplier else out


def solve_auto(f, rhs):
    """Plain solve, or the bordered solve when ``f`` carries a kernel."""
    return solve_augmented(f, rhs) if f.has_kernel else solve(f, rhs)


_CACHE = weakref.WeakKeyDictionary()


def cached_factor(ops, name):
    """Factorisation of ``getattr(ops, name)``, computed once per operator set."""
    per_ops = _CACHE.setdefault(ops, {})
    if name not in per_ops:
        per_ops[name] = factorize(getattr(ops, name))
    return per_ops[name]
