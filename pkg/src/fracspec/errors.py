"""Exception hierarchy shared by all fracspec modules."""


class FracSpecError(Exception):
    """Base class for library errors."""


class DomainError(FracSpecError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Gamma-type function evaluated at a pole."""


class IntegerOrderError(DomainError):
    """Fractional-only path invoked with an integer derivative order."""


class ConvergenceError(FracSpecError, ArithmeticError):
    """An iterative procedure exhausted its budget."""


class ToleranceError(ConvergenceError):
    """Adaptive quadrature could not meet the requested tolerance."""


class RankDeficiencyError(FracSpecError, ArithmeticError):
    def __init__(self, rank, expected):
        super().__init__(f"collocation system is rank deficient: numerical rank {rank} < {expected}")
        self.rank = rank
        self.expected = expected


class CacheError(FracSpecError):
    """FSGIM cache file is unreadable or inconsistent."""
