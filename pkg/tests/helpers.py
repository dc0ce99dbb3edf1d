from fracspec.gegenbauer import BasisParams
from fracspec.grid import build_grid
from fracspec.quadrature import build_sgirv


def grid(lam, n):
    return build_grid(BasisParams(lam, n))


def rule(lam_q, n_q):
    return build_sgirv(build_grid(BasisParams(lam_q, n_q)))
