"""Command-line interface: ``fracspec {caputo,solve-bt,sweep,fsgim}``.

Exit codes: 0 success, 2 usage, 3 numerical failure, 4 I/O failure.
All tables go to standard output as CSV; diagnostics go to standard error.
"""

import argparse
import csv
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import cache
from .bagley_torvik import evaluate_solution, load_problem, solve
from .caputo import CaputoOrder, apply_caputo, build_fsgim, caputo_any_order
from .errors import CacheError, ConvergenceError, DomainError, FracSpecError, RankDeficiencyError
from .gegenbauer import BasisParams
from .grid import build_grid
from .oracles import TestFunction, exact_caputo, exact_solution
from .quadrature import build_sgirv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

log = logging.getLogger("fracspec")


class UsageError(Exception):
    pass


def _fmt(x):
    return repr(float(x))


def _writer(stream):
    return csv.writer(stream, lineterminator="\n")


def _float_list(text, what):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{what}: expected a comma-separated list of numbers, got {text!r}") from None
    if not vals:
        raise UsageError(f"{what}: list is empty")
    return vals


def _n_range(text):
    """'3:7' (inclusive), '3' or '3,5,9'."""
    try:
        if ":" in text:
            lo, hi = (int(v) for v in text.split(":"))
            vals = list(range(lo, hi + 1))
        else:
            vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--n-range: cannot parse {text!r}") from None
    if not vals:
        raise UsageError(f"--n-range {text!r} is empty")
    return vals


def _function(text):
    try:
        return TestFunction.parse(text)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _rule(lam_q, n_q):
    return build_sgirv(build_grid(BasisParams(lam_q, n_q)))


def _cache_dir(args):
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    return cache.default_cache_dir()


# -- caputo -----------------------------------------------------------------

def cmd_caputo(args, out):
    f = _function(args.func)
    points = _float_list(args.points, "--points")
    order = CaputoOrder.of(args.alpha)
    grid = build_grid(BasisParams(args.lam, args.n))
    rule = _rule(args.lam_q, args.n_q)
    samples = f(grid.nodes)
    cache_dir = _cache_dir(args)
    if not order.is_integer and cache_dir is not None:
        fsgim, status = cache.load_or_build(order, grid, rule, points, cache_dir=cache_dir)
        log.info("FSGIM cache %s", status)
        approx = apply_caputo(fsgim, samples)
    else:
        approx = caputo_any_order(order, grid, rule, samples, points)

    w = _writer(out)
    if args.compare_oracle:
        w.writerow(["point", "approximation", "oracle", "abs_error"])
        for z, v in zip(points, approx):
            ref = exact_caputo(f, order, z)
            w.writerow([_fmt(z), _fmt(v), _fmt(ref), _fmt(abs(v - ref))])
    else:
        w.writerow(["point", "approximation"])
        for z, v in zip(points, approx):
            w.writerow([_fmt(z), _fmt(v)])
    return EXIT_OK


# -- solve-bt ---------------------------------------------------------------

def cmd_solve_bt(args, out):
    if args.eval_points < 2:
        raise UsageError("--eval-points must be at least 2")
    try:
        problem = load_problem(args.problem)
    except FileNotFoundError:
        raise UsageError(f"problem file not found: {args.problem}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {args.problem}: {exc}") from None
    except DomainError as exc:
        raise UsageError(f"{args.problem}: {exc}") from None
    ref = None
    if args.exact is not None:
        try:
            ref = exact_solution(args.exact)
        except DomainError as exc:
            raise UsageError(str(exc)) from None

    sol = solve(problem)
    xs = np.linspace(0.0, 1.0, args.eval_points)
    us = evaluate_solution(sol, xs)
    w = _writer(out)
    if ref is None:
        w.writerow(["x", "u"])
        for x, u in zip(xs, us):
            w.writerow([_fmt(x), _fmt(u)])
    else:
        errs = np.abs(us - ref(xs))
        w.writerow(["x", "u", "abs_error"])
        for x, u, e in zip(xs, us, errs):
            w.writerow([_fmt(x), _fmt(u), _fmt(e)])
        print(f"max_abs_error={_fmt(errs.max())}", file=sys.stderr)
    print(f"residual_norm={_fmt(sol.residual_norm)}", file=sys.stderr)
    return EXIT_OK


# -- sweep ------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    function: TestFunction
    alpha: float
    lambdas: tuple
    ns: tuple
    lam_q: float
    n_q: int
    points: tuple

    def __post_init__(self):
        if not self.lambdas or not self.ns or not self.points:
            raise UsageError("sweep ranges must be nonempty")
        if not self.alpha > 0:
            raise UsageError(f"--alpha must be positive, got {self.alpha}")


def _sweep_block(spec, rule, lam, n):
    order = CaputoOrder.of(spec.alpha)
    grid = build_grid(BasisParams(lam, n))
    approx = caputo_any_order(order, grid, rule, spec.function(grid.nodes), list(spec.points))
    rows = []
    for z, v in zip(spec.points, approx):
        err = abs(v - exact_caputo(spec.function, order, z))
        rows.append((lam, n, z, err, math.log10(err) if err > 0 else -math.inf))
    return rows


def run_sweep(spec, jobs=1):
    """Rows ordered by lambda, then n, then point, whatever the job count."""
    rule = _rule(spec.lam_q, spec.n_q)
    combos = [(lam, n) for lam in spec.lambdas for n in spec.ns]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(lambda c: _sweep_block(spec, rule, *c), combos))
    else:
        blocks = [_sweep_block(spec, rule, *c) for c in combos]
    return [row for block in blocks for row in block]


def cmd_sweep(args, out):
    spec = SweepSpec(
        function=_function(args.func),
        alpha=args.alpha,
        lambdas=tuple(_float_list(args.lambdas, "--lambdas")),
        ns=tuple(_n_range(args.n_range)),
        lam_q=args.lam_q,
        n_q=args.n_q,
        points=tuple(_float_list(args.points, "--points")),
    )
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    w = _writer(out)
    w.writerow(["lambda", "n", "point", "abs_error", "log10_abs_error"])
    for lam, n, z, err, lg in run_sweep(spec, args.jobs):
        w.writerow([_fmt(lam), str(n), _fmt(z), _fmt(err), _fmt(lg)])
    return EXIT_OK


# -- fsgim ------------------------------------------------------------------

def cmd_fsgim(args, out):
    order = CaputoOrder.of(args.alpha)
    if order.is_integer:
        raise UsageError(
            f"alpha={args.alpha} is an integer; FSGIMs are fractional only. "
            "Use `fracspec caputo` (differentiation-matrix path) instead."
        )
    points = _float_list(args.points, "--points")
    grid = build_grid(BasisParams(args.lam, args.n))
    rule = _rule(args.lam_q, args.n_q)
    path = Path(args.out) if args.out else None
    cache_dir = _cache_dir(args)
    if path is None and cache_dir is None:
        raise UsageError(f"give --out or --cache-dir (or set {cache.CACHE_ENV})")
    fsgim, status = cache.load_or_build(order, grid, rule, points, path=path, cache_dir=cache_dir)
    if status == "hit":
        print("cache hit: reusing stored FSGIM", file=sys.stderr)
    elif status == "rebuilt":
        print("cache rebuilt: stored FSGIM was unusable", file=sys.stderr)
    else:
        print("cache miss: FSGIM built and stored", file=sys.stderr)
    w = _writer(out)
    w.writerow(["rows", "cols", "status"])
    w.writerow([fsgim.matrix.shape[0], fsgim.matrix.shape[1], status])
    return EXIT_OK


# -- parser -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_discretization(p, n_default, nq_default):
    p.add_argument("--lambda", dest="lam", type=float, default=0.5, help="Gegenbauer index of the grid")
    p.add_argument("--n", type=int, default=n_default, help="interpolant degree")
    p.add_argument("--lambda-q", dest="lam_q", type=float, default=0.5, help="quadrature index")
    p.add_argument("--n-q", dest="n_q", type=int, default=nq_default, help="quadrature degree")


def build_parser():
    parser = _Parser(prog="fracspec", description="Shifted Gegenbauer pseudospectral Caputo tools")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("caputo", help="Caputo derivative of a test function at points")
    p.add_argument("--func", required=True, help="monomial:N, exp:beta or poly:c0,c1,...")
    p.add_argument("--alpha", type=float, required=True)
    _add_discretization(p, 12, 15)
    p.add_argument("--points", default="0.5", help="comma-separated points in [0, 1]")
    p.add_argument("--compare-oracle", action="store_true", help="add exact value and error columns")
    p.add_argument("--cache-dir", help="FSGIM cache directory (default $%s)" % cache.CACHE_ENV)
    p.set_defaults(handler=cmd_caputo)

    p = sub.add_parser("solve-bt", help="solve a Bagley-Torvik problem from JSON")
    p.add_argument("--problem", required=True, help="problem JSON file")
    p.add_argument("--eval-points", type=int, default=50, help="equispaced output points")
    p.add_argument("--exact", help="exact solution for error columns: x^2, 1+x or x^2-x")
    p.set_defaults(handler=cmd_solve_bt)

    p = sub.add_parser("sweep", help="error sweep over lambda and n")
    p.add_argument("--func", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--lambdas", default="0.5", help="comma-separated Gegenbauer indices")
    p.add_argument("--n-range", required=True, help="lo:hi inclusive, or a comma list")
    p.add_argument("--lambda-q", dest="lam_q", type=float, default=0.5)
    p.add_argument("--n-q", dest="n_q", type=int, default=15)
    p.add_argument("--points", default="0.5")
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("fsgim", help="build or reuse a cached FSGIM")
    p.add_argument("--alpha", type=float, required=True)
    _add_discretization(p, 12, 15)
    p.add_argument("--points", required=True)
    p.add_argument("--out", help="cache file path")
    p.add_argument("--cache-dir", help="cache directory (default $%s)" % cache.CACHE_ENV)
    p.set_defaults(handler=cmd_fsgim)
    return parser


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    logging.basicConfig(format="fracspec: %(message)s", stream=sys.stderr)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"fracspec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.handler(args, out)
    except UsageError as exc:
        print(f"fracspec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, RankDeficiencyError, ArithmeticError) as exc:
        print(f"fracspec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DomainError as exc:
        print(f"fracspec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, CacheError) as exc:
        print(f"fracspec: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except FracSpecError as exc:
        print(f"fracspec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
