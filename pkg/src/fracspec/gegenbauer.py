"""Shifted Gegenbauer (SG) polynomials on [0, 1].

The polynomials are standardized so that G_j(1) = 1 and G_j(0) = (-1)^j,
and are orthogonal against the weight (x - x^2)^(lam - 1/2).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

#: Stability buffer keeping the index away from -1/2.
LAMBDA_EPS = 1e-6


@dataclass(frozen=True)
class BasisParams:
    """Gegenbauer index ``lam`` and maximum degree ``n`` of an SG family."""

    lam: float
    n: int

    def __post_init__(self):
        if not self.lam > -0.5 + LAMBDA_EPS:
            raise DomainError(f"Gegenbauer index must exceed -1/2 + {LAMBDA_EPS}, got {self.lam}")
        if self.n < 0 or int(self.n) != self.n:
            raise DomainError(f"degree must be a non-negative integer, got {self.n}")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "n", int(self.n))


def _check_unit_interval(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0) or np.any(np.isnan(x)):
        raise DomainError("evaluation points must lie in [0, 1]")
    return x


def _forward(lam, n, t, out):
    out[0] = 1.0
    out[1] = t
    for j in range(1, n):
        out[j + 1] = (2.0 * (j + lam) * t * out[j] - j * out[j - 1]) / (j + 2.0 * lam)


def _forward_near_one(lam, n, u, out):
    # Reinsch-modified recurrence in u = 1 - t, carried on d_j = G_j - G_{j-1}.
    d = -u
    out[0] = 1.0
    out[1] = 1.0 - u
    for j in range(1, n):
        d = (j * d - 2.0 * (j + lam) * u * out[j]) / (j + 2.0 * lam)
        out[j + 1] = out[j] + d


def sg_table(lam, n, x):
    """Rows G_0..G_n evaluated at ``x`` (any shape); no domain check.

    Returns an array of shape ``(n + 1,) + x.shape``. Points with
    |2x - 1| > 1/2 go through a difference form of the recurrence driven by
    the exactly representable distance to the nearer endpoint, which keeps
    full relative accuracy near 0 and 1.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n + 1,) + x.shape)
    out[0] = 1.0
    if n == 0:
        return out
    if x.ndim == 0:
        flat_x = x.reshape(1)
        flat = out.reshape(n + 1, 1)
    else:
        flat_x = x.reshape(-1)
        flat = out.reshape(n + 1, -1)

    low = flat_x < 0.25
    high = flat_x > 0.75
    mid = ~(low | high)
    if mid.any():
        buf = np.empty((n + 1, int(mid.sum())))
        _forward(lam, n, 2.0 * flat_x[mid] - 1.0, buf)
        flat[1:, mid] = buf[1:]
    if high.any():
        buf = np.empty((n + 1, int(high.sum())))
        _forward_near_one(lam, n, 2.0 * (1.0 - flat_x[high]), buf)
        flat[1:, high] = buf[1:]
    if low.any():
        buf = np.empty((n + 1, int(low.sum())))
        _forward_near_one(lam, n, 2.0 * flat_x[low], buf)
        buf[1::2] *= -1.0
        flat[1:, low] = buf[1:]
    return out


def eval_sg(params, x):
    """[G_0(x), ..., G_n(x)] by the forward three-term recurrence."""
    x = _check_unit_interval(x)
    return sg_table(params.lam, params.n, x)


def sg_derivative_factor(n, m, lam):
    """Scale factor with d^m/dx^m G_n^lam = factor * G_{n-m}^{lam+m}.

    Equal to (n-m+1)_m (n+2 lam)_m / (lam+1/2)_m, a rewriting of
    n! Gamma(lam+1/2) Gamma(n+m+2lam) / [(n-m)! Gamma(n+2lam) Gamma(m+lam+1/2)]
    that needs no gamma evaluations.
    """
    if m < 0 or n < m:
        raise DomainError(f"derivative factor needs n >= m >= 0, got n={n}, m={m}")
    out = 1.0
    for i in range(m):
        out *= (n - i) * (n + 2.0 * lam + i) / (lam + 0.5 + i)
    return out


def eval_sg_mth_derivative(params, m, x):
    """m-th derivatives of G_0..G_n at ``x``; entries j < m are zero."""
    if m < 0 or m > params.n:
        raise DomainError(f"derivative order must satisfy 0 <= m <= n, got m={m}, n={params.n}")
    x = _check_unit_interval(x)
    out = np.zeros((params.n + 1,) + x.shape)
    shifted = sg_table(params.lam + m, params.n - m, x)
    for j in range(m, params.n + 1):
        out[j] = sg_derivative_factor(j, m, params.lam) * shifted[j - m]
    return out


def normalization(params):
    """Squared weighted norms of G_0..G_n on [0, 1].

    lambdabar_0 = Gamma(lam+1/2)^2 / Gamma(2 lam + 1) and, for j >= 1,
    lambdabar_j = j! Gamma(lam+1/2)^2 / (2 (j + lam) Gamma(j + 2 lam)).
    At lam = 0 this is the shifted Chebyshev sequence [pi, pi/2, pi/2, ...].
    """
    lam = params.lam
    lg_half = math.lgamma(lam + 0.5)
    out = np.empty(params.n + 1)
    out[0] = math.exp(2.0 * lg_half - math.lgamma(2.0 * lam + 1.0))
    for j in range(1, params.n + 1):
        out[j] = math.exp(
            math.lgamma(j + 1.0) + 2.0 * lg_half - math.lgamma(j + 2.0 * lam)
        ) / (2.0 * (j + lam))
    return out


def leading_coefficient(params):
    """Leading monomial coefficients K_0..K_n of G_0..G_n."""
    lam = params.lam
    out = np.empty(params.n + 1)
    out[0] = 1.0
    for j in range(params.n):
        ratio = 2.0 if j == 0 else 4.0 * (j + lam) / (j + 2.0 * lam)
        out[j + 1] = ratio * out[j]
    return out
