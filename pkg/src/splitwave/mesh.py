"""Periodic 1D meshes.

Node ``l`` sits at ``node_x[l]`` and element ``m`` spans nodes ``m`` and
``(m + 1) % n``; the node at ``x = L`` is identified with node 0.
"""

from dataclasses import dataclass

import numpy as np

from splitwave.errors import InvalidMeshError


@dataclass(frozen=True, eq=False)
class Mesh:
    length_L: float
    n: int
    node_x: np.ndarray
    elem_dx: np.ndarray

    def __post_init__(self):
        for arr in (self.node_x, self.elem_dx):
            arr.setflags(write=False)

    @property
    def elem_center_x(self):
        return self.node_x + 0.5 * self.elem_dx

    @property
    def is_uniform(self):
        return bool(np.all(self.elem_dx == self.elem_dx[0]))

    def element_nodes(self, m):
        """Return the (left, right) node indices of element ``m``."""
        return m % self.n, (m + 1) % self.n

    def __eq__(self, other):
        if not isinstance(other, Mesh):
            return NotImplemented
        return (
            self.n == other.n
            and self.length_L == other.length_L
            and np.array_equal(self.node_x, other.node_x)
            and np.array_equal(self.elem_dx, other.elem_dx)
        )

    __hash__ = None


def uniform_periodic(n, length_L):
    """Uniform periodic mesh with ``n`` equal elements on ``[0, length_L]``."""
    if int(n) != n or n < 3:
        raise InvalidMeshError(f"need at least 3 elements, got {n}")
    if not length_L > 0:
        raise InvalidMeshError(f"domain length must be positive, got {length_L}")
    n = int(n)
    dx = length_L / n
    return Mesh(
        length_L=float(length_L),
        n=n,
        node_x=np.arange(n) * dx,
        elem_dx=np.full(n, dx),
    )


def nonuniform_periodic(widths):
    widths = np.asarray(widths, dtype=float)
    if widths.ndim != 1 or len(widths) < 3:
        raise InvalidMeshError(f"need at least 3 element widths, got {len(np.atleast_1d(widths))}")
    if not np.all(widths > 0):
        raise InvalidMeshError("element widths must be positive")
    node_x = np.concatenate(([0.0], np.cumsum(widths)[:-1]))
    return Mesh(
        length_L=float(widths.sum()),
        n=len(widths),
        node_x=node_x,
        elem_dx=widths.copy(),
    )
