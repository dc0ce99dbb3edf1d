"""Collocation solver for a D^alpha u + b D^1.5 u + c u = f on [0, 1] with Dirichlet data.

The n+1 collocation equations at the SGG nodes are stacked with the two
boundary rows, and the resulting (n+3) x (n+1) system is solved in the
least-squares sense by column-pivoted QR.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .caputo import CaputoOrder, build_fsgim
from .differentiation import build_sgdm
from .errors import DomainError, RankDeficiencyError
from .gegenbauer import BasisParams
from .grid import build_grid
from .interpolation import barycentric
from .oracles import builtin_forcing
from .quadrature import build_sgirv

BT_ORDER = 1.5


@dataclass(frozen=True)
class Discretization:
    lam: float
    n: int
    lam_q: float
    n_q: int

    def __post_init__(self):
        # BasisParams does the range checks
        BasisParams(self.lam, self.n)
        BasisParams(self.lam_q, self.n_q)


@dataclass(frozen=True, eq=False)
class BagleyTorvikProblem:
    a: float
    b: float
    c: float
    alpha: float
    forcing: object  # callable or nodal samples
    gamma1: float
    gamma2: float
    discretization: Discretization

    def __post_init__(self):
        if not self.alpha > 1:
            raise DomainError(f"the leading order must exceed 1, got alpha={self.alpha}")
        if self.a == 0 and self.b == 0 and self.c == 0:
            raise DomainError("a, b and c are all zero: there is no equation")
        for name in ("a", "b", "c", "alpha", "gamma1", "gamma2"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")


@dataclass(frozen=True, eq=False)
class SpectralSolution:
    grid: object
    nodal_values: np.ndarray
    residual_norm: float
    boundary_residuals: tuple
    rank: int


def _operator(alpha, grid, rule):
    """alpha-order Caputo operator from nodal samples to values at the nodes."""
    order = CaputoOrder.of(alpha)
    if order.is_integer:
        return build_sgdm(grid, order.m).matrix
    return build_fsgim(order, grid, rule, grid.nodes).matrix


def boundary_rows(grid):
    """Rows mapping nodal samples to the interpolant at 0 and at 1."""
    j = np.arange(grid.n + 1)
    scaled = grid.basis_at_nodes / grid.norm_factors[:, None]
    at_zero = ((-1.0) ** j) @ scaled * grid.christoffel
    at_one = np.ones(grid.n + 1) @ scaled * grid.christoffel
    return at_zero, at_one


def _forcing_values(problem, grid):
    f = problem.forcing
    if callable(f):
        vals = np.asarray(f(grid.nodes), dtype=float)
    else:
        vals = np.asarray(f, dtype=float)
    if vals.shape != (grid.n + 1,):
        raise DomainError(f"forcing must give {grid.n + 1} nodal values, got shape {vals.shape}")
    if not np.all(np.isfinite(vals)):
        raise DomainError("forcing values must be finite")
    return vals


def assemble(problem, grid=None, rule=None):
    """Return (A, rhs, grid, rule) for the stacked collocation system."""
    d = problem.discretization
    grid = grid if grid is not None else build_grid(BasisParams(d.lam, d.n))
    rule = rule if rule is not None else build_sgirv(build_grid(BasisParams(d.lam_q, d.n_q)))
    n1 = grid.n + 1
    top = problem.c * np.eye(n1)
    if problem.a != 0:
        top = top + problem.a * _operator(problem.alpha, grid, rule)
    if problem.b != 0:
        top = top + problem.b * _operator(BT_ORDER, grid, rule)
    at_zero, at_one = boundary_rows(grid)
    A = np.vstack([top, at_zero, at_one])
    rhs = np.concatenate([_forcing_values(problem, grid), [problem.gamma1, problem.gamma2]])
    return A, rhs, grid, rule


def lstsq_qr(A, rhs):
    """Least-squares solution by column-pivoted QR; returns (x, numerical rank)."""
    Q, R, perm = scipy.linalg.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = max(A.shape) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    rank = int(np.sum(diag > tol))
    if rank < A.shape[1]:
        raise RankDeficiencyError(rank, A.shape[1])
    y = scipy.linalg.solve_triangular(R, Q.T @ rhs)
    x = np.empty_like(y)
    x[perm] = y
    return x, rank


def solve(problem):
    A, rhs, grid, _ = assemble(problem)
    u, rank = lstsq_qr(A, rhs)
    u.flags.writeable = False
    residual = float(np.linalg.norm(A @ u - rhs))
    b0 = barycentric(grid, u, 0.0) - problem.gamma1
    b1 = barycentric(grid, u, 1.0) - problem.gamma2
    return SpectralSolution(
        grid=grid,
        nodal_values=u,
        residual_norm=residual,
        boundary_residuals=(float(b0), float(b1)),
        rank=rank,
    )


def evaluate_solution(sol, z):
    """Barycentric interpolant of the nodal solution at ``z`` (scalar or array)."""
    return barycentric(sol.grid, sol.nodal_values, z)


def problem_from_dict(spec):
    """Build a problem from the JSON schema used by the command line."""
    try:
        disc = spec["discretization"]
        d = Discretization(
            lam=float(disc["lambda"]),
            n=int(disc["n"]),
            lam_q=float(disc["lambda_q"]),
            n_q=int(disc["n_q"]),
        )
        gamma = [float(g) for g in spec["gamma"]]
        if len(gamma) != 2:
            raise DomainError("gamma must hold exactly two boundary values")
        forcing = spec["forcing"]
        kind = forcing["kind"]
        if kind == "builtin":
            f = builtin_forcing(forcing["name"])
        elif kind == "samples":
            f = np.asarray([float(v) for v in forcing["values"]])
        else:
            raise DomainError(f"unknown forcing kind {kind!r}")
        return BagleyTorvikProblem(
            a=float(spec["a"]),
            b=float(spec["b"]),
            c=float(spec["c"]),
            alpha=float(spec["alpha"]),
            forcing=f,
            gamma1=gamma[0],
            gamma2=gamma[1],
            discretization=d,
        )
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed problem description: {exc!r}") from exc
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed problem description: {exc}") from exc


def load_problem(path):
    with open(Path(path), encoding="utf-8") as fh:
        return problem_from_dict(json.load(fh))
