"""Shifted Gegenbauer pseudospectral approximation of Caputo fractional derivatives."""

from .bagley_torvik import BagleyTorvikProblem, Discretization, evaluate_solution, solve
from .caputo import CaputoOrder, apply_caputo, build_fsgim, caputo_any_order
from .differentiation import build_sgdm
from .errors import (
    CacheError,
    ConvergenceError,
    DomainError,
    FracSpecError,
    IntegerOrderError,
    PoleError,
    RankDeficiencyError,
    ToleranceError,
)
from .gegenbauer import BasisParams, eval_sg, normalization
from .grid import Grid, build_grid
from .interpolation import barycentric, lagrange_rows
from .oracles import TestFunction, brute_force_caputo, exact_caputo
from .quadrature import build_sgirv, integrate

__version__ = "0.1.0"
