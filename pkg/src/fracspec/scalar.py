"""Scalar special functions: gamma, log-gamma, Pochhammer, Mittag-Leffler E_{1,rho}."""

import math
from decimal import Decimal, localcontext

from .errors import ConvergenceError, DomainError, PoleError

ML_REL_TOL = 1e-17
ML_MIN_TERMS = 5
ML_MAX_TERMS = 10000


def _is_pole(x):
    return x <= 0 and x == math.floor(x)


def gamma(x):
    """Gamma function for real ``x`` off the non-positive integers.

    Raises ``PoleError`` at poles and ``OverflowError`` once the value leaves
    the double range (x > ~171.62).
    """
    x = float(x)
    if _is_pole(x):
        raise PoleError(f"gamma has a pole at {x}")
    try:
        return math.gamma(x)
    except OverflowError:
        raise OverflowError(f"gamma({x}) exceeds the double range") from None


def log_gamma(x):
    """Natural log of gamma for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def pochhammer(x, k):
    """Rising factorial (x)_k = x (x+1) ... (x+k-1); (x)_0 = 1."""
    if k < 0 or int(k) != k:
        raise DomainError(f"pochhammer needs a non-negative integer k, got {k}")
    out = 1.0
    for i in range(int(k)):
        out *= x + i
        if math.isinf(out):
            raise OverflowError(f"pochhammer({x}, {k}) exceeds the double range")
    return out


def mittag_leffler_e1(z, rho):
    """Two-parameter Mittag-Leffler function E_{1,rho}(z) = sum_k z^k / Gamma(k + rho).

    The series is summed as ``sum_k z^k / (rho)_k`` in decimal arithmetic with
    enough guard digits to absorb the cancellation of negative arguments, then
    divided by Gamma(rho). Only ``rho > 0`` is supported.
    """
    if not rho > 0:
        raise DomainError(f"mittag_leffler_e1 requires rho > 0, got {rho}")
    z = float(z)
    if not math.isfinite(z):
        raise DomainError("mittag_leffler_e1 requires a finite argument")
    guard = int(math.ceil(2.0 * abs(z) / math.log(10.0)))
    with localcontext() as ctx:
        ctx.prec = 40 + guard
        dz, drho = Decimal(z), Decimal(float(rho))
        tol = Decimal(ML_REL_TOL)
        term = Decimal(1)
        total = Decimal(1)
        k = 0
        while True:
            term = term * dz / (drho + k)
            k += 1
            total += term
            if k >= ML_MIN_TERMS and abs(term) < tol * abs(total):
                break
            if k >= ML_MAX_TERMS:
                raise ConvergenceError(
                    f"Mittag-Leffler series did not converge in {ML_MAX_TERMS} terms (z={z})"
                )
        series = float(total)
    return series / gamma(rho)
