"""SG interpolation: modal Lagrange rows and barycentric evaluation."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gegenbauer import _check_unit_interval, sg_table

#: Distance below which an evaluation point is treated as a node.
NODE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class InterpolantRowSet:
    grid: object
    eval_points: np.ndarray
    # row i holds L_0..L_n at eval_points[i]
    matrix: np.ndarray

    def apply(self, samples):
        return self.matrix @ np.asarray(samples, dtype=float)


def modal_lagrange_matrix(grid, z):
    """L_k(z_i) = w_k sum_j G_j(x_k) G_j(z_i) / lambdabar_j, no domain check."""
    gz = sg_table(grid.lam, grid.n, np.asarray(z, dtype=float).reshape(-1))
    scaled = grid.basis_at_nodes / grid.norm_factors[:, None]
    return (gz.T @ scaled) * grid.christoffel[None, :]


def cardinal_matrix(grid, z):
    """L_k(z_i) through the barycentric formula, no domain check.

    Same values as ``modal_lagrange_matrix`` but accurate to a few ulps,
    since it avoids the long modal sums.
    """
    flat = np.asarray(z, dtype=float).reshape(-1)
    diff = flat[:, None] - grid.nodes[None, :]
    hit = np.abs(diff) <= NODE_TOL
    diff[hit] = 1.0
    c = grid.bary_weights[None, :] / diff
    out = c / c.sum(axis=1, keepdims=True)
    rows = hit.any(axis=1)
    out[rows] = hit[rows]
    return out


def lagrange_rows(grid, eval_points):
    """Modal Lagrange cardinal values of ``grid`` at each evaluation point."""
    z = _check_unit_interval(np.atleast_1d(eval_points))
    mat = modal_lagrange_matrix(grid, z)
    z = z.copy()
    z.flags.writeable = False
    mat.flags.writeable = False
    return InterpolantRowSet(grid=grid, eval_points=z, matrix=mat)


def _check_samples(grid, samples):
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or samples.size != len(grid):
        raise DomainError(f"expected {len(grid)} nodal samples, got shape {samples.shape}")
    return samples


def barycentric(grid, samples, z):
    """Second-form barycentric interpolant at an array of points."""
    samples = _check_samples(grid, samples)
    z = _check_unit_interval(z)
    flat = np.atleast_1d(z).reshape(-1)
    diff = flat[:, None] - grid.nodes[None, :]
    hit = np.abs(diff) <= NODE_TOL
    exact = hit.any(axis=1)
    diff[hit] = 1.0
    c = grid.bary_weights[None, :] / diff
    out = (c @ samples) / c.sum(axis=1)
    if exact.any():
        rows, cols = np.nonzero(hit)
        out[rows] = samples[cols]
    return out.reshape(np.shape(z)) if np.ndim(z) else float(out[0])


def interpolate(grid, samples, z):
    """Value of the degree-n SG interpolant of ``samples`` at a scalar ``z``."""
    return float(barycentric(grid, samples, float(z)))


def interpolate_modal(grid, samples, z):
    """Same interpolant through the modal Lagrange form."""
    samples = _check_samples(grid, samples)
    z = _check_unit_interval(z)
    vals = modal_lagrange_matrix(grid, z) @ samples
    return vals.reshape(np.shape(z)) if np.ndim(z) else float(vals[0])
