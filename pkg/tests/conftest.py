"""Shared fixtures and independent oracles.

The oracles realise each group family as matrices (plus the Z_m coordinate)
and multiply with plain matrix products; they never touch the power tables or
the closed-form laws used by the package.
"""

from collections import deque
from itertools import product

import numpy as np
import pytest

from cayleydd import _kernels
from cayleydd.groups import CyclicGroup, DoubledGroup, SquareGroup

BACKENDS = ["numpy"] + (["numba"] if _kernels.HAS_NUMBA else [])


def _matpow(M, k, n):
    R = np.eye(len(M), dtype=object)
    for _ in range(k):
        R = R.dot(M) % n
    return R


def matrix_mul(group, g, h):
    """Product via the affine-matrix realisation of each family."""
    if isinstance(group, DoubledGroup):
        b = group.base
        g1, g2, h1, h2 = (g[0], g[1]), (g[2], g[3]), (h[0], h[1]), (h[2], h[3])
        top = matrix_mul(b, g1, h1)
        inv_h1 = next(x for x in product(range(b.m), range(b.n)) if matrix_mul(b, h1, x) == (0, 0))
        conj = matrix_mul(b, matrix_mul(b, inv_h1, g2), h1)
        return top + matrix_mul(b, conj, h2)
    m, n = group.m, group.n
    if isinstance(group, CyclicGroup):
        A = np.array([[group.a]], dtype=object)
    else:
        A = np.array(group.sigma, dtype=object)
    k = A.shape[0]

    def emb(x):
        M = np.zeros((k + 1, k + 1), dtype=object)
        M[:k, :k] = _matpow(A, x[0], n)
        M[k, :k] = x[1:]
        M[k, k] = 1
        return M

    P = emb(g).dot(emb(h)) % n
    return ((g[0] + h[0]) % m,) + tuple(int(c) for c in P[k, :k])


def all_elements(group):
    return list(product(*(range(r) for r in group.radices)))


def brute_diameter(group, gens):
    """Max eccentricity by pure-Python BFS from every vertex over matrix_mul."""
    elems = all_elements(group)
    adj = {v: [matrix_mul(group, v, s) for s in gens] for v in elems}
    best = 0
    for src in elems:
        dist = {src: 0}
        q = deque([src])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        if len(dist) != len(elems):
            return -1
        best = max(best, max(dist.values()))
    return best


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def s3():
    return CyclicGroup(2, 3, 2)


@pytest.fixture
def g1155():
    return CyclicGroup(15, 77, 4)


@pytest.fixture
def sq360():
    return SquareGroup(40, 3, ((1, 1), (1, 0)))


@pytest.fixture
def dbl3025():
    return DoubledGroup(CyclicGroup(5, 11, 4))


@pytest.fixture
def dbl36():
    return DoubledGroup(CyclicGroup(2, 3, 2))


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, verdict, detail in sorted(ACCEPTANCE, key=lambda t: str(t[0])):
        terminalreporter.write_line(f"criterion {criterion}: {verdict}  {detail}")
