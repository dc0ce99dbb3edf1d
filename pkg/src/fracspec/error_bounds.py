"""Computable factors of the truncation-error analysis.

Only the factors with explicit closed forms are provided: the interpolation
coefficient eta, the asymptotic constant vartheta, the quadrature decay
factor Lambda, its convergence predicate and the auxiliary sequence E(j).
Everything is evaluated in log space.
"""

import math
from dataclasses import dataclass, field

from .caputo import CaputoOrder
from .errors import DomainError
from .gegenbauer import LAMBDA_EPS


@dataclass(frozen=True)
class ErrorDiagnostics:
    eta: float
    vartheta: float
    lambda_decay: float
    convergent: bool
    recommended_lambda_q_max: float
    lambda_q_flagged: bool
    quadrature_error_vanishes: bool
    notes: tuple = field(default_factory=tuple)


def _fractional(alpha):
    order = alpha if isinstance(alpha, CaputoOrder) else CaputoOrder.of(alpha)
    if order.is_integer:
        raise DomainError(f"alpha={order.alpha} is an integer; the bounds need a fractional order")
    return order


def log_eta_coefficient(alpha, lam, n):
    order = _fractional(alpha)
    m = order.m
    if n < m - 1 or int(n) != n:
        raise DomainError(f"eta needs an integer n >= m-1 = {m - 1}, got {n}")
    if not lam > -0.5:
        raise DomainError(f"lambda must exceed -1/2, got {lam}")
    return (
        0.5 * math.log(math.pi)
        - (2.0 * lam + 2.0 * n + 1.0) * math.log(2.0)
        + math.lgamma(m + n + 2.0 * lam + 1.0)
        - math.lgamma(n - m + 2.0)
        - math.lgamma(order.gap)
        - math.lgamma(m + lam + 0.5)
        - math.lgamma(n + lam + 1.0)
    )


def eta_coefficient(alpha, lam, n):
    """sqrt(pi) 2^(-2lam-2n-1) Gamma(m+n+2lam+1) / [(n-m+1)! Gamma(m-alpha) Gamma(m+lam+1/2) Gamma(n+lam+1)]."""
    return math.exp(log_eta_coefficient(alpha, lam, n))


def vartheta_factor(m, lam):
    """e^(-1/2) s^(-lam-m) [s sinh(1/s)]^((1-2lam-2m)/4) with s = lam + m - 1/2."""
    s = lam + m - 0.5
    if not s > 0:
        raise DomainError(f"vartheta needs lambda + m > 1/2, got lambda={lam}, m={m}")
    log_val = (
        -0.5
        - (lam + m) * math.log(s)
        + 0.25 * (1.0 - 2.0 * lam - 2.0 * m) * math.log(s * math.sinh(1.0 / s))
    )
    return math.exp(log_val)


def _convergence_ratio(order, x, eta_point):
    gap = order.gap
    return x * eta_point ** ((1.0 - gap) / gap) / gap


def quadrature_convergence_check(alpha, x, eta_point):
    """True when x eta^((1-m+alpha)/(m-alpha)) / (m-alpha) < 1."""
    order = _fractional(alpha)
    return _convergence_ratio(order, float(x), float(eta_point)) < 1.0


def lambda_decay(alpha, n_q, x, eta_point=1.0):
    """(x/(m-alpha))^(n_q+1) eta^((n_q+1)(1-m+alpha)/(m-alpha)); eta = 1 is the worst case."""
    order = _fractional(alpha)
    ratio = _convergence_ratio(order, float(x), float(eta_point))
    if ratio == 0.0:
        return 0.0
    log_val = (n_q + 1) * math.log(ratio)
    return math.inf if log_val > 709.0 else math.exp(log_val)


def log_e_sequence(j, lam, m, n_q):
    """log E(j) for j > m + n_q."""
    if not j > m + n_q:
        raise DomainError(f"E(j) is defined for j > m + n_q = {m + n_q}, got {j}")
    return (
        (1.0 - 2.0 * lam - 2.0 * m) * math.log(j)
        + (m + n_q + 0.5 - j) * math.log(j - m - n_q)
        + (j + 2.0 * lam + m + n_q + 0.5) * math.log(j + n_q)
    )


def total_bound_report(alpha, lam, lam_q, n, n_q, x):
    """Collect the computable factors and the parameter-selection checks."""
    order = _fractional(alpha)
    m = order.m
    upper = lam + 2 * m + 1
    flagged = not (-0.5 + LAMBDA_EPS <= lam_q <= upper)
    vanishes = n_q > n - m - 1
    convergent = quadrature_convergence_check(order, x, 1.0)
    notes = []
    if flagged:
        notes.append(f"lambda_q={lam_q} lies outside [-1/2+eps, lambda+2m+1 = {upper}]")
    if vanishes:
        notes.append("n_q > n-m-1: the quadrature truncation error vanishes, only interpolation error remains")
    if not convergent:
        notes.append("worst-case quadrature factor does not decay in n_q at this x")
    if n_q <= m:
        notes.append("n_q is not large compared with m; asymptotic factors are indicative only")
    return ErrorDiagnostics(
        eta=eta_coefficient(order, lam, n),
        vartheta=vartheta_factor(m, lam),
        lambda_decay=lambda_decay(order, n_q, x),
        convergent=convergent,
        recommended_lambda_q_max=upper,
        lambda_q_flagged=flagged,
        quadrature_error_vanishes=vanishes,
        notes=tuple(notes),
    )
