"""On-disk FSGIM cache.

Layout (all binary values little-endian IEEE-754 binary64)::

    FSGIM1\\n
    <alpha> <lambda> <n> <lambda_q> <n_q> <M> <fnv1a64(eval point bytes)>\\n
    generator, (M+1)*(n+1) values, row-major
    eval points, M+1 values
"""

import logging
import os
from pathlib import Path

import numpy as np

from .caputo import CaputoOrder, _assemble, _require_fractional, build_fsgim
from .errors import CacheError

log = logging.getLogger(__name__)

MAGIC = b"FSGIM1\n"
CACHE_ENV = "FRACSPEC_CACHE_DIR"
_LE = np.dtype("<f8")

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data):
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK
    return h


def _point_bytes(points):
    return np.ascontiguousarray(points, dtype=_LE).tobytes()


def _header(alpha, lam, n, lam_q, n_q, points):
    fields = (
        repr(float(alpha)),
        repr(float(lam)),
        str(int(n)),
        repr(float(lam_q)),
        str(int(n_q)),
        str(len(points) - 1),
        str(fnv1a_64(_point_bytes(points))),
    )
    return " ".join(fields).encode("ascii") + b"\n"


def write_fsgim(path, fsgim):
    """Serialize the generator and evaluation points of ``fsgim`` to ``path``."""
    path = Path(path)
    g, r = fsgim.grid, fsgim.rule
    z = fsgim.eval_points
    blob = (
        MAGIC
        + _header(fsgim.order.alpha, g.lam, g.n, r.lam, r.n, z)
        + np.ascontiguousarray(fsgim.generator, dtype=_LE).tobytes()
        + _point_bytes(z)
    )
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(blob)
    os.replace(tmp, path)
    return path


def read_fsgim(path):
    """Parse a cache file; returns (metadata dict, generator, eval points).

    Raises ``CacheError`` on bad magic, malformed metadata, wrong payload
    size or an eval-point hash mismatch.
    """
    data = Path(path).read_bytes()
    if not data.startswith(MAGIC):
        raise CacheError(f"{path}: bad magic")
    end = data.find(b"\n", len(MAGIC))
    if end < 0:
        raise CacheError(f"{path}: missing metadata line")
    try:
        a, lam, n, lam_q, n_q, M, h = data[len(MAGIC):end].decode("ascii").split()
        meta = dict(
            alpha=float(a), lam=float(lam), n=int(n), lam_q=float(lam_q),
            n_q=int(n_q), M=int(M), hash=int(h),
        )
    except (UnicodeDecodeError, ValueError) as exc:
        raise CacheError(f"{path}: malformed metadata line") from exc

    rows, cols = meta["M"] + 1, meta["n"] + 1
    payload = data[end + 1:]
    expected = 8 * (rows * cols + rows)
    if len(payload) != expected:
        raise CacheError(f"{path}: payload has {len(payload)} bytes, expected {expected}")
    gen = np.frombuffer(payload, dtype=_LE, count=rows * cols).reshape(rows, cols)
    z = np.frombuffer(payload, dtype=_LE, offset=8 * rows * cols, count=rows)
    if fnv1a_64(z.tobytes()) != meta["hash"]:
        raise CacheError(f"{path}: eval-point hash mismatch")
    return meta, gen.astype(float), z.astype(float)


def cache_filename(alpha, lam, n, lam_q, n_q, points):
    key = fnv1a_64(_header(alpha, lam, n, lam_q, n_q, points))
    return f"fsgim_{key:016x}.bin"


def default_cache_dir():
    value = os.environ.get(CACHE_ENV)
    return Path(value) if value else None


def load_or_build(order, grid, rule, eval_points, path=None, cache_dir=None):
    """Return ``(fsgim, status)`` with status one of "hit", "built", "rebuilt".

    A file whose parameters match is reused; unreadable or mismatching files
    are replaced after a logged warning.
    """
    order = order if isinstance(order, CaputoOrder) else CaputoOrder.of(order)
    _require_fractional(order)
    z = np.atleast_1d(np.asarray(eval_points, dtype=float)).reshape(-1)
    if path is None:
        cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
        if cache_dir is None:
            raise CacheError(f"no cache location: pass a path, a cache_dir or set {CACHE_ENV}")
        path = cache_dir / cache_filename(order.alpha, grid.lam, grid.n, rule.lam, rule.n, z)
    path = Path(path)

    status = "built"
    if path.exists():
        try:
            meta, gen, zc = read_fsgim(path)
        except CacheError as exc:
            log.warning("corrupted FSGIM cache, rebuilding: %s", exc)
            status = "rebuilt"
        else:
            same = (
                meta["alpha"] == order.alpha and meta["lam"] == grid.lam and meta["n"] == grid.n
                and meta["lam_q"] == rule.lam and meta["n_q"] == rule.n
                and zc.shape == z.shape and np.array_equal(zc, z)
            )
            if same:
                return _assemble(order, grid, rule, zc, gen), "hit"
            log.warning("FSGIM cache %s holds different parameters, rebuilding", path)
            status = "rebuilt"

    fsgim = build_fsgim(order, grid, rule, z)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_fsgim(path, fsgim)
    return fsgim, status
