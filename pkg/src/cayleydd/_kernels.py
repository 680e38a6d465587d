"""Index-space BFS kernels.

Vertices are dense integer indices (mixed radix, leftmost coordinate most
significant).  Right multiplication by a fixed generator is evaluated directly
on indices, so the graph is never materialised.  Distances live in a uint8
array with 255 meaning "not reached".

Two backends share one contract: a numba ``@njit`` scalar loop and a
vectorised numpy path.  Set ``CAYLEYDD_BACKEND=numpy`` (or ``NUMBA_DISABLE_JIT=1``
at import time) to force the fallback; the default is numba when importable.  When the
variable says numpy at import time, numba is not imported at all.
"""

from __future__ import annotations

import os

import numpy as np

UNSEEN = 255
MAX_DISTANCE = 254

# forcing numpy at import time also skips the numba import (about 50 MB RSS)
if os.environ.get("CAYLEYDD_BACKEND", "").strip().lower() == "numpy":
    HAS_NUMBA = False
else:
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover
        HAS_NUMBA = False


def default_backend() -> str:
    env = os.environ.get("CAYLEYDD_BACKEND", "").strip().lower()
    if env in ("numpy", "numba"):
        if env == "numba" and not HAS_NUMBA:
            raise RuntimeError("CAYLEYDD_BACKEND=numba but numba is not available")
        return env
    return "numba" if HAS_NUMBA else "numpy"


# numpy path


def right_multiply(family, m, n, table, idx, g):
    """Indices of ``v * g`` for every index ``v`` in ``idx`` (int64 array)."""
    idx = np.asarray(idx, dtype=np.int64)
    if family == 0:
        x, y = np.divmod(idx, n)
        u, v = int(g[0]), int(g[1])
        return ((x + u) % m) * n + (y * table[u, 0] + v) % n
    if family == 1:
        nn = n * n
        c, r = np.divmod(idx, nn)
        d, e = np.divmod(r, n)
        f = int(g[0])
        p00, p01, p10, p11 = table[f]
        nd = (d * p00 + e * p10 + int(g[1])) % n
        ne = (d * p01 + e * p11 + int(g[2])) % n
        return ((c + f) % m) * nn + nd * n + ne
    mn = m * n
    hi, lo = np.divmod(idx, mn)
    x1, x2 = np.divmod(hi, n)
    x3, x4 = np.divmod(lo, n)
    y1, y2, y3, y4 = (int(c) for c in g[:4])
    pw = table[:, 0]
    z3 = (x3 + y3) % m
    z2 = (x2 * pw[y1] + y2) % n
    z4 = (x4 * pw[(y1 + y3) % m] + y2 * pw[y3] - y2 * pw[z3] + y4) % n
    return (((x1 + y1) % m * n + z2) * m + z3) * n + z4


def _bfs_numpy(family, m, n, table, gens, order, dist, chunk=1 << 20):
    dist[:] = UNSEEN
    dist[0] = 0
    hist = [1]
    level = 0
    while True:
        frontier = np.flatnonzero(dist == level)
        nxt = level + 1
        for start in range(0, frontier.size, chunk):
            part = frontier[start : start + chunk]
            for g in gens:
                nb = right_multiply(family, m, n, table, part, g)
                fresh = nb[dist[nb] == UNSEEN]
                if nxt > MAX_DISTANCE and fresh.size:
                    return np.array(hist, dtype=np.int64), True
                dist[fresh] = nxt
        count = int(np.count_nonzero(dist == nxt))
        if count == 0:
            return np.array(hist, dtype=np.int64), False
        hist.append(count)
        level = nxt


# numba path

if HAS_NUMBA:

    @njit(cache=True, nogil=True, error_model="numpy")
    def _step(family, m, n, table, i, g):
        # operands are pre-reduced, so sums of two residues need one subtraction
        if family == 0:
            x = i // n
            y = i - x * n
            u = g[0]
            z1 = x + u
            if z1 >= m:
                z1 -= m
            return z1 * n + (y * table[u, 0] + g[1]) % n
        elif family == 1:
            nn = n * n
            c = i // nn
            r = i - c * nn
            d = r // n
            e = r - d * n
            f = g[0]
            z1 = c + f
            if z1 >= m:
                z1 -= m
            nd = (d * table[f, 0] + e * table[f, 2] + g[1]) % n
            ne = (d * table[f, 1] + e * table[f, 3] + g[2]) % n
            return z1 * nn + nd * n + ne
        else:
            mn = m * n
            hi = i // mn
            lo = i - hi * mn
            x1 = hi // n
            x2 = hi - x1 * n
            x3 = lo // n
            x4 = lo - x3 * n
            y1 = g[0]
            y2 = g[1]
            y3 = g[2]
            z1 = x1 + y1
            if z1 >= m:
                z1 -= m
            z3 = x3 + y3
            if z3 >= m:
                z3 -= m
            s13 = y1 + y3
            if s13 >= m:
                s13 -= m
            z2 = (x2 * table[y1, 0] + y2) % n
            z4 = (x4 * table[s13, 0] + y2 * table[y3, 0] + y2 * (n - table[z3, 0]) + g[3]) % n
            return ((z1 * n + z2) * m + z3) * n + z4

    @njit(cache=True, nogil=True, error_model="numpy")
    def _bfs_numba_core(family, m, n, table, gens, order, dist, hist):
        for i in range(order):
            dist[i] = 255
        dist[0] = 0
        hist[0] = 1
        level = 0
        ngens = gens.shape[0]
        while True:
            nxt = level + 1
            count = 0
            for i in range(order):
                if dist[i] != level:
                    continue
                for k in range(ngens):
                    j = _step(family, m, n, table, i, gens[k])
                    if dist[j] == 255:
                        if nxt > 254:
                            return level, True
                        dist[j] = nxt
                        count += 1
            if count == 0:
                return level, False
            hist[nxt] = count
            level = nxt

    @njit(cache=True, nogil=True, error_model="numpy")
    def _right_multiply_numba(family, m, n, table, idx, g, out):
        for t in range(idx.shape[0]):
            out[t] = _step(family, m, n, table, idx[t], g)

    def _bfs_numba(family, m, n, table, gens, order, dist):
        hist = np.zeros(256, dtype=np.int64)
        last, overflow = _bfs_numba_core(family, m, n, table, gens, order, dist, hist)
        return hist[: last + 1].copy(), overflow


def right_multiply_numba(family, m, n, table, idx, g):
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    out = np.empty_like(idx)
    _right_multiply_numba(family, m, n, table, idx, np.asarray(g, dtype=np.int64), out)
    return out


def bfs_levels(family, m, n, table, gens, order, dist, backend=None):
    """Fill ``dist`` (uint8, length ``order``) from vertex 0; return
    ``(histogram, overflowed)`` where ``histogram[d]`` counts vertices at
    distance ``d``."""
    backend = backend or default_backend()
    table = np.ascontiguousarray(table, dtype=np.int64)
    gens = np.ascontiguousarray(gens, dtype=np.int64)
    if backend == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        return _bfs_numba(family, m, n, table, gens, order, dist)
    if backend == "numpy":
        return _bfs_numpy(family, m, n, table, gens, order, dist)
    raise ValueError(f"unknown backend {backend!r}")
