"""Integer-order differentiation matrices on SGG nodes (barycentric form)."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True, eq=False)
class Sgdm:
    grid: object
    order: int
    matrix: np.ndarray

    def apply(self, samples):
        return self.matrix @ np.asarray(samples, dtype=float)


def first_order_matrix(nodes, weights):
    """D_ij = (w_j / w_i) / (x_i - x_j), diagonal by the negative-sum trick."""
    x = np.asarray(nodes, dtype=float)
    w = np.asarray(weights, dtype=float)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(np.abs(diff) < 1e-15):
        raise DomainError("differentiation matrix needs distinct nodes")
    D = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


def build_sgdm(grid, k):
    """Order-``k`` SGDM as the k-th matrix power of the first-order matrix."""
    if k < 1 or int(k) != k:
        raise DomainError(f"differentiation order must be a positive integer, got {k}")
    if grid.n < k:
        raise DomainError(f"order-{k} differentiation needs n >= {k}, got n={grid.n}")
    D = first_order_matrix(grid.nodes, grid.bary_weights)
    mat = np.linalg.matrix_power(D, int(k))
    mat.flags.writeable = False
    return Sgdm(grid=grid, order=int(k), matrix=mat)
