"""Integration row vector over [0, 1] on shifted Gegenbauer-Gauss nodes."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gegenbauer import BasisParams
from .grid import build_grid
from .interpolation import cardinal_matrix


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    grid: object
    weights: np.ndarray

    @property
    def nodes(self):
        return self.grid.nodes

    @property
    def lam(self):
        return self.grid.lam

    @property
    def n(self):
        return self.grid.n


def build_sgirv(grid_q):
    """Interpolatory weights p_k = int_0^1 L_k(y) dy for the nodes of ``grid_q``.

    Each cardinal has degree n_q, so an auxiliary Gauss-Legendre rule with
    ceil((n_q + 2) / 2) points integrates it exactly.
    """
    n_aux = math.ceil((grid_q.n + 2) / 2) - 1
    aux = build_grid(BasisParams(0.5, n_aux))
    cardinals = cardinal_matrix(grid_q, aux.nodes)
    weights = aux.christoffel @ cardinals
    weights.flags.writeable = False
    return QuadratureRule(grid=grid_q, weights=weights)


def integrate(rule, samples):
    samples = np.asarray(samples, dtype=float)
    if samples.shape[-1] != rule.weights.size:
        raise DomainError(f"expected {rule.weights.size} samples, got {samples.shape[-1]}")
    return samples @ rule.weights
