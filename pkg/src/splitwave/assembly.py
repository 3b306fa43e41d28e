"""Mass, stiffness and projection matrices on a periodic mesh.

Every operator is cyclic tridiagonal (or narrower) and is stored by bands:
row ``i`` holds ``lower[i]`` at column ``i-1``, ``diag[i]`` at ``i`` and
``upper[i]`` at ``i+1``, with column indices taken mod ``n``.

Node-indexed rows/columns use ``l``, element-indexed ones use ``m``; element
``m`` lies between nodes ``m`` and ``m+1``.
"""

import csv
from dataclasses import dataclass

import numpy as np

from splitwave import kernels
from splitwave.errors import DimensionError
from splitwave.mesh import Mesh


@dataclass(frozen=True, eq=False)
class CyclicBandedMatrix:
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    label: str = ""

    def __post_init__(self):
        n = len(self.diag)
        if len(self.lower) != n or len(self.upper) != n:
            raise DimensionError("band lengths differ")
        for band in (self.lower, self.diag, self.upper):
            band.setflags(write=False)

    @property
    def n(self):
        return len(self.diag)

    @property
    def bands(self):
        return {-1: self.lower, 0: self.diag, 1: self.upper}

    @property
    def T(self):
        return CyclicBandedMatrix(
            lower=np.roll(self.upper, 1),
            diag=self.diag.copy(),
            upper=np.roll(self.lower, -1),
            label=f"{self.label}^T" if self.label else "",
        )

    def scaled(self, factor, label=None):
        return CyclicBandedMatrix(
            self.lower * factor, self.diag * factor, self.upper * factor,
            label=self.label if label is None else label,
        )

    def norm_inf(self):
        return float(np.max(np.abs(self.lower) + np.abs(self.diag) + np.abs(self.upper)))

    def __matmul__(self, v):
        return apply(self, v)


def _band(values):
    return np.ascontiguousarray(values, dtype=float)


@dataclass(frozen=True, eq=False)
class OperatorSet:
    m_nn: CyclicBandedMatrix
    d_nn: CyclicBandedMatrix
    m_ee: CyclicBandedMatrix
    d_en: CyclicBandedMatrix
    d_ne: CyclicBandedMatrix
    m_ne: CyclicBandedMatrix
    m_en: CyclicBandedMatrix
    p_ne: CyclicBandedMatrix
    mesh: Mesh

    @property
    def n(self):
        return self.mesh.n

    def as_dict(self):
        return {name: getattr(self, name) for name in
                ("m_nn", "d_nn", "m_ee", "d_en", "d_ne", "m_ne", "m_en", "p_ne")}


def assemble_all(mesh):
    """Assemble all operators for ``mesh`` from closed-form hat/step integrals."""
    n = mesh.n
    dx = np.asarray(mesh.elem_dx, dtype=float)
    dx_prev = np.roll(dx, 1)  # width of element l-1, left of node l
    zeros, ones, half = np.zeros(n), np.ones(n), np.full(n, 0.5)

    m_nn = CyclicBandedMatrix(_band(dx_prev / 6.0), _band((dx_prev + dx) / 3.0),
                              _band(dx / 6.0), "M^nn")
    # entry (l, l') = int dphi_l'/dx phi_l dx; antisymmetric including the wrap
    d_nn = CyclicBandedMatrix(_band(-half), _band(zeros), _band(half), "D^nn")
    m_ee = CyclicBandedMatrix(_band(zeros), _band(dx), _band(zeros), "M^ee")
    d_en = CyclicBandedMatrix(_band(zeros), _band(-ones), _band(ones), "D^en")
    p_ne = CyclicBandedMatrix(_band(half), _band(half), _band(zeros), "P^ne")
    m_ne = CyclicBandedMatrix(_band(0.5 * dx_prev), _band(0.5 * dx), _band(zeros), "M^ne")

    d_ne = d_en.T
    m_en = m_ne.T
    return OperatorSet(
        m_nn=m_nn, d_nn=d_nn, m_ee=m_ee, d_en=d_en,
        d_ne=CyclicBandedMatrix(d_ne.lower, d_ne.diag, d_ne.upper, "D^ne"),
        m_ne=m_ne,
        m_en=CyclicBandedMatrix(m_en.lower, m_en.diag, m_en.upper, "M^en"),
        p_ne=p_ne, mesh=mesh,
    )


def apply(matrix, v):
    """Matrix-vector product honouring the cyclic wrap. Accepts complex ``v``."""
    v = np.asarray(v)
    if v.shape != (matrix.n,):
        raise DimensionError(f"vector of shape {v.shape} does not match n={matrix.n}")
    if np.iscomplexobj(v):
        return apply(matrix, v.real) + 1j * apply(matrix, v.imag)
    return kernels.cyclic_matvec(matrix.lower, matrix.diag, matrix.upper, v)


def to_dense(matrix):
    n = matrix.n
    dense = np.zeros((n, n))
    rows = np.arange(n)
    for offset, band in matrix.bands.items():
        np.add.at(dense, (rows, (rows + offset) % n), band)
    return dense


def dump_csv(matrix, path):
    """Write the stored entries of ``matrix`` as ``row,col,value`` lines."""
    n = matrix.n
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "col", "value"])
        for row in range(n):
            for offset in (-1, 0, 1):
                value = matrix.bands[offset][row]
                if value != 0.0:
                    writer.writerow([row, (row + offset) % n, f"{value:.17e}"])
