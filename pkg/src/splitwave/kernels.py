"""Backend selection for the hot O(N) kernels.

The compiled extension is used when it imports; set ``SPLITWAVE_KERNELS=python``
to force the pure-Python fallback.
"""

import os

import numpy as np

from splitwave import _pykernels

_requested = os.environ.get("SPLITWAVE_KERNELS", "auto").lower()

if _requested == "python":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from splitwave import _ckernels as _impl
    except ImportError:
        if _requested == "cython":
            raise
        _impl = _pykernels
        BACKEND = "python"
    else:
        BACKEND = "cython"

__all__ = ["BACKEND", "cyclic_matvec", "thomas_solve", "thomas_factor", "backends"]


def backends():
    """Return ``{name: module}`` for every importable kernel backend."""
    found = {"python": _pykernels}
    try:
        from splitwave import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found


def cyclic_matvec(lower, diag, upper, v):
    return _impl.cyclic_matvec(lower, diag, upper, np.ascontiguousarray(v, dtype=float))


def thomas_solve(lower, cp, inv_den, rhs):
    return _impl.thomas_solve(lower, cp, inv_den, np.ascontiguousarray(rhs, dtype=float))


def thomas_factor(lower, diag, upper, pivot_tol):
    """LU-factorise a non-cyclic tridiagonal matrix without pivoting.

    Returns ``(cp, inv_den)`` for :func:`thomas_solve`, or ``None`` when a
    pivot falls below ``pivot_tol`` in magnitude.
    """
    n = len(diag)
    cp = np.zeros(n)
    inv_den = np.zeros(n)
    prev_cp = 0.0
    for i in range(n):
        den = diag[i] - (lower[i] * prev_cp if i > 0 else 0.0)
        if abs(den) <= pivot_tol:
            return None
        inv_den[i] = 1.0 / den
        prev_cp = upper[i] / den if i < n - 1 else 0.0
        cp[i] = prev_cp
    return cp, inv_den
