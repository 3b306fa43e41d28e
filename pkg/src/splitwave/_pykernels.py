"""Pure-Python kernels, used when the compiled extension is unavailable.

Conventions shared with ``_ckernels``:

* ``cyclic_matvec`` multiplies by the cyclic tridiagonal matrix whose row ``i``
  holds ``lower[i]`` at column ``i-1``, ``diag[i]`` at ``i`` and ``upper[i]`` at
  ``i+1`` (indices mod n).
* ``thomas_solve`` runs the forward/backward sweeps of a non-cyclic tridiagonal
  LU factorisation: ``cp`` are the modified super-diagonal entries and
  ``inv_den`` the reciprocal pivots produced by :func:`thomas_factor`.
  ``lower[0]`` is ignored.
"""

import numpy as np


def cyclic_matvec(lower, diag, upper, v):
    return lower * np.roll(v, 1) + diag * v + upper * np.roll(v, -1)


def thomas_solve(lower, cp, inv_den, rhs):
    n = len(rhs)
    x = [0.0] * n
    if n == 0:
        return np.empty(0)
    prev = rhs[0] * inv_den[0]
    x[0] = prev
    for i in range(1, n):
        prev = (rhs[i] - lower[i] * prev) * inv_den[i]
        x[i] = prev
    for i in range(n - 2, -1, -1):
        prev = x[i] - cp[i] * prev
        x[i] = prev
    return np.array(x)
