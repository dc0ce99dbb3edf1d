"""Fractional shifted Gegenbauer integration matrices (FSGIMs).

For a fractional order alpha with m = ceil(alpha), the change of variables
tau = x (1 - y^(1/(m - alpha))) turns the Caputo derivative into

    D^alpha f(x) = x^(m-alpha) / Gamma(m-alpha+1) * int_0^1 f^(m)(x (1 - y^(1/(m-alpha)))) dy,

a regular integral over [0, 1]. Replacing f by its SG interpolant and using
d^m G_j^lam = chi_{j,m} G_{j-m}^{lam+m} reduces the operator to a dense
matrix acting on nodal samples.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .differentiation import build_sgdm
from .errors import DomainError, IntegerOrderError
from .gegenbauer import _check_unit_interval, sg_derivative_factor, sg_table
from .interpolation import barycentric

INTEGER_TOL = 1e-12
CONDITIONING_GAP = 1e-3


class ConditioningWarning(RuntimeWarning):
    """Fractional order sits just below an integer; the y-transform is stiff."""


@dataclass(frozen=True)
class CaputoOrder:
    alpha: float
    m: int
    is_integer: bool

    @classmethod
    def of(cls, alpha):
        alpha = float(alpha)
        if not alpha > 0 or not math.isfinite(alpha):
            raise DomainError(f"Caputo order must be a positive finite number, got {alpha}")
        nearest = round(alpha)
        if abs(alpha - nearest) < INTEGER_TOL:
            return cls(alpha=alpha, m=int(nearest), is_integer=True)
        m = math.ceil(alpha)
        if m - alpha < CONDITIONING_GAP:
            warnings.warn(
                f"alpha={alpha} is within {CONDITIONING_GAP} of {m}; the quadrature "
                "nodes are raised to a very large power and accuracy degrades",
                ConditioningWarning,
                stacklevel=3,
            )
        return cls(alpha=alpha, m=m, is_integer=False)

    @property
    def gap(self):
        """m - alpha, in (0, 1) on the fractional path."""
        return self.m - self.alpha


def _as_order(order):
    return order if isinstance(order, CaputoOrder) else CaputoOrder.of(order)


def _require_fractional(order):
    if order.is_integer:
        raise IntegerOrderError(
            f"alpha={order.alpha} is an integer; use the differentiation-matrix path "
            "(caputo_any_order or build_sgdm)"
        )


def _y_power(y, gap):
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    pos = y > 0.0
    out[pos] = np.exp(np.log(y[pos]) / gap)
    return out


def transformed_argument(x, y, order):
    """x (1 - y^(1/(m - alpha))), always inside [0, x]."""
    order = _as_order(order)
    _require_fractional(order)
    out = np.asarray(x, dtype=float) * (1.0 - _y_power(y, order.gap))
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class Fsgim:
    order: CaputoOrder
    grid: object
    rule: object
    eval_points: np.ndarray
    generator: np.ndarray
    matrix: np.ndarray

    @property
    def scale(self):
        """z^(m - alpha) / Gamma(m - alpha + 1) per evaluation point."""
        return _row_scale(self.order, self.eval_points)

    def __matmul__(self, samples):
        return apply_caputo(self, samples)


def _row_scale(order, z):
    return np.power(z, order.gap) / math.gamma(order.gap + 1.0)


def build_generator(order, grid, rule, z):
    """FSGIM generator rows for evaluation points ``z`` (already validated)."""
    m, lam, n = order.m, grid.lam, grid.n
    gen = np.zeros((z.size, n + 1))
    if n < m:
        return gen
    ypow = _y_power(rule.nodes, order.gap)
    args = z[:, None] * (1.0 - ypow[None, :])
    # G_{0..n-m}^{lam+m} at every transformed quadrature node: (n-m+1, M+1, n_q+1)
    shifted = sg_table(lam + m, n - m, args)
    chi = np.array([sg_derivative_factor(j, m, lam) for j in range(m, n + 1)])
    integrals = np.tensordot(shifted, rule.weights, axes=([2], [0])).T * chi[None, :]
    modal = grid.basis_at_nodes[m:] / grid.norm_factors[m:, None]
    gen = (integrals @ modal) * grid.christoffel[None, :]
    return gen


def build_fsgim(order, grid, rule, eval_points):
    """alpha-order FSGIM of ``grid`` at ``eval_points`` with quadrature ``rule``."""
    order = _as_order(order)
    _require_fractional(order)
    z = _check_unit_interval(np.atleast_1d(eval_points)).astype(float).reshape(-1)
    gen = build_generator(order, grid, rule, z)
    return _assemble(order, grid, rule, z, gen)


def _assemble(order, grid, rule, z, gen):
    z = z.copy()
    mat = _row_scale(order, z)[:, None] * gen
    for a in (z, gen, mat):
        a.flags.writeable = False
    return Fsgim(order=order, grid=grid, rule=rule, eval_points=z, generator=gen, matrix=mat)


def apply_caputo(fsgim, samples):
    """Scaled generator product: z^(m-alpha) * (generator @ f) / Gamma(m-alpha+1)."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] != fsgim.generator.shape[1]:
        raise DomainError(
            f"expected {fsgim.generator.shape[1]} nodal samples, got {samples.shape[0]}"
        )
    return np.power(fsgim.eval_points, fsgim.order.gap) * (fsgim.generator @ samples) / math.gamma(
        fsgim.order.gap + 1.0
    )


def caputo_any_order(alpha, grid, rule, samples, eval_points):
    """Caputo derivative of the interpolant for any alpha > 0.

    Integer orders use the differentiation matrix and interpolate the nodal
    derivative to ``eval_points``; fractional orders go through the FSGIM.
    """
    order = _as_order(alpha)
    if order.is_integer:
        deriv = build_sgdm(grid, order.m).apply(samples)
        return np.atleast_1d(barycentric(grid, deriv, np.atleast_1d(eval_points)))
    return apply_caputo(build_fsgim(order, grid, rule, eval_points), samples)
