"""Reference Caputo derivatives: closed forms and a brute-force integrator.

Test functions are named by short descriptors:

    monomial:N        t^N
    exp:beta          e^(beta t)
    poly:c0,c1,...    c0 + c1 t + c2 t^2 + ...
"""

import math
from dataclasses import dataclass

import numpy as np

from .caputo import CaputoOrder
from .errors import DomainError, ToleranceError

SIMPSON_TOL = 1e-12
SIMPSON_MAX_INTERVALS = 2 ** 20
SERIES_REL_TOL = 1e-17
SERIES_MAX_TERMS = 10000


def _falling(N, m):
    """N (N-1) ... (N-m+1)."""
    out = 1.0
    for i in range(m):
        out *= N - i
    return out


@dataclass(frozen=True)
class TestFunction:
    kind: str
    descriptor: str
    N: int = 0
    beta: float = 0.0
    coefficients: tuple = ()

    __test__ = False  # keep pytest from collecting this class

    @classmethod
    def monomial(cls, N):
        if N < 0 or int(N) != N:
            raise DomainError(f"monomial degree must be a non-negative integer, got {N}")
        return cls(kind="monomial", descriptor=f"monomial:{int(N)}", N=int(N))

    @classmethod
    def exponential(cls, beta):
        beta = float(beta)
        if not math.isfinite(beta):
            raise DomainError("exponential rate must be finite")
        return cls(kind="exponential", descriptor=f"exp:{beta!r}", beta=beta)

    @classmethod
    def polynomial(cls, coefficients):
        coeffs = tuple(float(c) for c in coefficients)
        if not coeffs:
            raise DomainError("polynomial needs at least one coefficient")
        desc = "poly:" + ",".join(repr(c) for c in coeffs)
        return cls(kind="polynomial", descriptor=desc, coefficients=coeffs)

    @classmethod
    def parse(cls, text):
        name, sep, arg = text.strip().partition(":")
        if not sep or not arg:
            raise DomainError(f"cannot parse function descriptor {text!r}")
        try:
            if name == "monomial":
                value = float(arg)
                if value != int(value):
                    raise DomainError(f"monomial degree must be an integer, got {arg}")
                return cls.monomial(int(value))
            if name in ("exp", "exponential"):
                return cls.exponential(float(arg))
            if name in ("poly", "polynomial"):
                return cls.polynomial(float(c) for c in arg.split(","))
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"cannot parse function descriptor {text!r}") from exc
        raise DomainError(f"unknown function kind {name!r} in {text!r}")

    def _terms(self):
        # (coefficient, degree) pairs for the polynomial kinds
        if self.kind == "monomial":
            return [(1.0, self.N)]
        return [(c, k) for k, c in enumerate(self.coefficients) if c != 0.0]

    def __call__(self, t):
        return self.derivative(0)(t)

    def derivative(self, m):
        """Callable for the m-th classical derivative."""
        if m < 0 or int(m) != m:
            raise DomainError(f"derivative order must be a non-negative integer, got {m}")
        m = int(m)
        if self.kind == "exponential":
            beta = self.beta
            scale = beta ** m
            return lambda t: scale * np.exp(beta * np.asarray(t, dtype=float))
        terms = [(c * _falling(k, m), k - m) for c, k in self._terms() if k >= m]

        def f(t):
            t = np.asarray(t, dtype=float)
            out = np.zeros_like(t)
            for c, p in terms:
                out = out + c * t ** p
            return out if out.ndim else float(out)

        return f


def _monomial_caputo(N, order, t):
    if order.is_integer:
        return _falling(N, order.m) * t ** (N - order.m) if N >= order.m else 0.0
    if N <= order.m - 1:
        return 0.0
    if t == 0.0:
        return 0.0
    return math.exp(math.lgamma(N + 1) - math.lgamma(N + 1 - order.alpha)) * t ** (N - order.alpha)


def _exponential_caputo(beta, order, t):
    m = order.m
    if order.is_integer:
        return beta ** m * math.exp(beta * t)
    if t == 0.0 or beta == 0.0:
        return 0.0
    # sum_k beta^(k+m) t^(k+m-alpha) / Gamma(k+m-alpha+1)
    rho = order.gap + 1.0
    term = beta ** m * t ** order.gap / math.gamma(rho)
    total = term
    bt = beta * t
    for k in range(SERIES_MAX_TERMS):
        term *= bt / (k + rho)
        total += term
        if abs(term) <= SERIES_REL_TOL * abs(total):
            return total
    raise ToleranceError(f"Caputo series for exp({beta} t) did not converge at t={t}")


def exact_caputo(f, alpha, t):
    """Closed-form Caputo derivative of a registered test function at ``t``."""
    order = alpha if isinstance(alpha, CaputoOrder) else CaputoOrder.of(alpha)
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    if f.kind == "exponential":
        return _exponential_caputo(f.beta, order, t)
    return math.fsum(c * _monomial_caputo(k, order, t) for c, k in f._terms())


def _simpson(fa, fm, fb, h):
    return h * (fa + 4.0 * fm + fb) / 6.0


def adaptive_simpson(g, a, b, tol=SIMPSON_TOL, max_intervals=SIMPSON_MAX_INTERVALS):
    """Adaptive composite Simpson on [a, b] with an explicit work stack.

    Each interval is accepted once the two-panel estimate differs from the
    one-panel estimate by less than 15 times its share of ``tol``. Raises
    ``ToleranceError`` when the number of live intervals exceeds
    ``max_intervals``.
    """
    fa, fm, fb = g(a), g(0.5 * (a + b)), g(b)
    stack = [(a, b, fa, fm, fb, _simpson(fa, fm, fb, b - a), tol)]
    total = 0.0
    n_intervals = 1
    while stack:
        lo, hi, flo, fmid, fhi, whole, eps = stack.pop()
        mid = 0.5 * (lo + hi)
        fl, fr = g(0.5 * (lo + mid)), g(0.5 * (mid + hi))
        left = _simpson(flo, fl, fmid, mid - lo)
        right = _simpson(fmid, fr, fhi, hi - mid)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
            continue
        n_intervals += 1
        if n_intervals > max_intervals:
            raise ToleranceError(
                f"adaptive Simpson exceeded {max_intervals} intervals before reaching tol={tol}"
            )
        stack.append((lo, mid, flo, fl, fmid, left, 0.5 * eps))
        stack.append((mid, hi, fmid, fr, fhi, right, 0.5 * eps))
    return total


def brute_force_caputo(f_mth_derivative, alpha, t, tol=SIMPSON_TOL):
    """t^(m-alpha)/Gamma(m-alpha+1) * int_0^1 f^(m)(t (1 - y^(1/(m-alpha)))) dy.

    The caller passes the m-th derivative of f; the integral is done by
    adaptive Simpson, independently of any spectral machinery.
    """
    order = alpha if isinstance(alpha, CaputoOrder) else CaputoOrder.of(alpha)
    if order.is_integer:
        raise DomainError("brute_force_caputo handles fractional orders only")
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    if t == 0.0:
        return 0.0
    gap = order.gap
    scale = t ** gap / math.gamma(gap + 1.0)

    def g(y):
        return float(f_mth_derivative(t * (1.0 - y ** (1.0 / gap))))

    # the tolerance applies to the final value; never loosen it below tol
    return scale * adaptive_simpson(g, 0.0, 1.0, tol=tol / max(scale, 1.0))


# Bagley-Torvik forcings and exact solutions used by the reproductions
BUILTIN_FORCINGS = {
    "bt1": lambda x: x ** 2 + 2.0 + 4.0 * np.sqrt(x / math.pi),
    "bt2": lambda x: 1.0 + x,
    "bt3": lambda x: 2.0 * np.sqrt(x) / math.gamma(1.5) + x * (x - 1.0),
}

EXACT_SOLUTIONS = {
    "x^2": lambda x: x ** 2,
    "1+x": lambda x: 1.0 + x,
    "x^2-x": lambda x: x ** 2 - x,
}


def builtin_forcing(name):
    try:
        return BUILTIN_FORCINGS[name]
    except KeyError:
        raise DomainError(
            f"unknown forcing {name!r}; known: {', '.join(sorted(BUILTIN_FORCINGS))}"
        ) from None


def exact_solution(name):
    try:
        return EXACT_SOLUTIONS[name]
    except KeyError:
        raise DomainError(
            f"unknown exact solution {name!r}; known: {', '.join(sorted(EXACT_SOLUTIONS))}"
        ) from None
