"""Shifted Gegenbauer-Gauss nodes, Christoffel numbers and barycentric weights."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError
from .gegenbauer import BasisParams, normalization, sg_derivative_factor, sg_table

NEWTON_TOL = 1e-15
NEWTON_MAX_ITER = 100
NEWTON_POLISH = 2
MIN_NODE_GAP = 1e-12


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Grid:
    params: BasisParams
    nodes: np.ndarray
    christoffel: np.ndarray
    norm_factors: np.ndarray
    bary_weights: np.ndarray
    # G_j(x_k), row j, column k
    basis_at_nodes: np.ndarray = field(repr=False)

    @property
    def lam(self):
        return self.params.lam

    @property
    def n(self):
        return self.params.n

    def __len__(self):
        return self.nodes.size


def _newton_roots(lam, degree):
    """Roots of G_degree^lam by simultaneous Newton from shifted Chebyshev guesses.

    Each Newton step is deflated against the current estimates of the other
    roots (Ehrlich-Aberth correction), so iterates cannot collapse onto a root
    that is already claimed. This matters for lam >~ 1 where the Chebyshev
    guesses sit far outside the true node cluster.
    """
    k = np.arange(degree)
    x = 0.5 * (1.0 - np.cos((2 * k + 1) * np.pi / (2 * degree)))
    dfac = sg_derivative_factor(degree, 1, lam)
    active = np.ones(degree, dtype=bool)
    for _ in range(NEWTON_MAX_ITER):
        xa = x[active]
        p = sg_table(lam, degree, xa)[degree]
        dp = dfac * sg_table(lam + 1.0, degree - 1, xa)[degree - 1]
        diff = xa[:, None] - x[None, :]
        diff[diff == 0.0] = np.inf
        ratio = p / dp
        step = ratio / (1.0 - ratio * np.sum(1.0 / diff, axis=1))
        x[active] = xa - step
        done = np.abs(step) <= NEWTON_TOL
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            break
    else:
        raise ConvergenceError(
            f"Newton iteration for SGG nodes (lam={lam}, n+1={degree}) "
            f"did not converge in {NEWTON_MAX_ITER} iterations"
        )
    # polish: the absolute stopping rule is loose for nodes close to 0
    for _ in range(NEWTON_POLISH):
        p = sg_table(lam, degree, x)[degree]
        dp = dfac * sg_table(lam + 1.0, degree - 1, x)[degree - 1]
        x = x - p / dp
    return x


def _barycentric_weights(x):
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    logmag = -np.sum(np.log(np.abs(diff)), axis=1)
    sign = np.prod(np.sign(diff), axis=1)
    w = sign * np.exp(logmag - logmag.max())
    return w


def build_grid(params):
    """SGG grid of ``params.n + 1`` nodes on [0, 1] for index ``params.lam``."""
    lam, n = params.lam, params.n
    x = np.sort(_newton_roots(lam, n + 1))
    # Exact symmetry about 1/2. The lower half is authoritative: those roots
    # carry full relative accuracy, and 1 - x is then correctly rounded.
    half = (n + 1) // 2
    if half:
        x[n + 1 - half:] = 1.0 - x[:half][::-1]
    if (n + 1) % 2:
        x[half] = 0.5
    if np.any(x <= 0.0) or np.any(x >= 1.0):
        raise ConvergenceError(f"SGG nodes left (0, 1) for lam={lam}, n={n}")
    if n > 0 and np.min(np.diff(x)) < MIN_NODE_GAP:
        raise ConvergenceError(f"duplicate SGG nodes found for lam={lam}, n={n}")

    lam_bar = normalization(params)
    basis = sg_table(lam, n, x)
    christoffel = 1.0 / np.sum(basis**2 / lam_bar[:, None], axis=0)
    return Grid(
        params=params,
        nodes=_frozen(x),
        christoffel=_frozen(christoffel),
        norm_factors=_frozen(lam_bar),
        bary_weights=_frozen(_barycentric_weights(x)),
        basis_at_nodes=_frozen(basis),
    )


def weighted_quadrature(grid, samples):
    """Gauss rule for the weight (x - x^2)^(lam - 1/2) applied to nodal samples."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] != len(grid):
        raise DomainError(f"expected {len(grid)} samples, got {samples.shape[0]}")
    return grid.christoffel @ samples
