import io
from itertools import product

import numpy as np
import pytest

from cayleydd import _kernels
from cayleydd.cayley import (
    all_pairs_diameter_oracle,
    bfs_stats,
    close_under_inverses,
    edge_array,
    export_graph,
    neighbors,
)
from cayleydd.errors import ContainsIdentity, DistanceOverflow, EmptySet, MemoryBudgetExceeded, SinkError, TooLarge
from cayleydd.groups import CyclicGroup, DoubledGroup, SquareGroup
from cayleydd.records import load_records
from cayleydd.search import moore_bound

from .conftest import all_elements, brute_diameter, matrix_mul

RECORDS = {r.key: r for r in load_records()}


def record_set(key):
    r = RECORDS[key]
    return r.spec, close_under_inverses(r.spec, r.generators)


class TestClosure:
    def test_record_4_7(self, g1155):
        S = close_under_inverses(g1155, [[6, 2], [10, 9]])
        assert S.elements == ((6, 2), (10, 9), (9, 5), (5, 24))
        assert S.degree == 4
        assert S.involution_count == 0

    def test_record_7_5(self):
        G = CyclicGroup(52, 53, 2)
        S = close_under_inverses(G, [[25, 45], [30, 23], [40, 39], [26, 0]])
        assert S.degree == 7
        assert S.involution_count == 1
        assert S.degree == 2 * 3 + S.involution_count

    def test_idempotent(self, g1155):
        S = close_under_inverses(g1155, [[6, 2], [10, 9]])
        assert close_under_inverses(g1155, S.elements) == S

    def test_duplicates_collapse(self, g1155):
        S = close_under_inverses(g1155, [[6, 2], [6, 2], [9, 5]])
        assert S.elements == ((6, 2), (9, 5))

    def test_errors(self, g1155):
        with pytest.raises(ContainsIdentity):
            close_under_inverses(g1155, [[6, 2], [0, 0]])
        with pytest.raises(EmptySet):
            close_under_inverses(g1155, [])


class TestNeighbors:
    def test_identity_neighbors_are_generators(self, g1155):
        S = close_under_inverses(g1155, [[6, 2], [10, 9]])
        assert neighbors(g1155, S, (0, 0)) == list(S.elements)

    def test_hand_checked(self, g1155):
        S = close_under_inverses(g1155, [[6, 2], [10, 9]])
        assert matrix_mul(g1155, (6, 2), (6, 2)) == (12, 32)
        assert neighbors(g1155, S, (6, 2))[0] == (12, 32)

    @pytest.mark.parametrize("key", [(4, 7), (6, 4), (4, 8), (7, 5)])
    def test_edge_symmetry(self, key):
        G, S = record_set(key)
        rng = np.random.default_rng(1)
        for _ in range(1000):
            x = G.random_element(rng)
            s = S.elements[rng.integers(S.degree)]
            y = G.multiply(x, s)
            assert x in neighbors(G, S, y)

    def test_kernel_right_multiply_matches_scalar(self, backend):
        rng = np.random.default_rng(3)
        for key in [(4, 7), (6, 4), (4, 8), (10, 5), (8, 9)]:
            G, S = record_set(key)
            idx = rng.integers(G.order, size=500)
            for s, g in zip(S.elements, S.as_array()):
                if backend == "numba":
                    got = _kernels.right_multiply_numba(G.family_code, G.m, G.n, G.kernel_table(), idx, g)
                else:
                    got = _kernels.right_multiply(G.family_code, G.m, G.n, G.kernel_table(), idx, g)
                want = [G.index(G.multiply(G.unindex(int(i)), s)) for i in idx]
                assert got.tolist() == want


class TestBfs:
    def test_record_4_7(self, backend):
        G, S = record_set((4, 7))
        st = bfs_stats(G, S, backend=backend)
        assert (st.order, st.degree, st.diameter, st.connected) == (1155, 4, 7, True)

    def test_complete_graph(self, s3, backend):
        S = close_under_inverses(s3, all_elements(s3)[1:])
        st = bfs_stats(s3, S, backend=backend)
        assert (st.degree, st.diameter) == (5, 1)

    def test_s3_degree_three(self, s3, backend):
        S = close_under_inverses(s3, [[1, 0], [0, 1]])
        assert (0, 2) in S
        assert brute_diameter(s3, S.elements) == 2
        st = bfs_stats(s3, S, backend=backend)
        assert (st.degree, st.diameter) == (3, 2)

    def test_square_record(self, backend):
        G, S = record_set((7, 3))
        st = bfs_stats(G, S, backend=backend)
        assert (st.order, st.degree, st.diameter) == (144, 7, 3)

    def test_disconnected(self, g1155, backend):
        # [0, 1] generates only the normal subgroup Z_77
        S = close_under_inverses(g1155, [[0, 1]])
        st = bfs_stats(g1155, S, backend=backend)
        assert not st.connected
        assert st.diameter is None
        assert st.reached == 77
        assert sum(st.distance_histogram) == st.reached

    def test_budget(self, g1155):
        S = close_under_inverses(g1155, [[6, 2]])
        with pytest.raises(MemoryBudgetExceeded):
            bfs_stats(g1155, S, max_order=1000)

    def test_distance_overflow(self, backend):
        # a cycle of length 600 has diameter 300 > 254
        G = CyclicGroup(1, 600, 1)
        S = close_under_inverses(G, [[0, 1]])
        with pytest.raises(DistanceOverflow):
            bfs_stats(G, S, backend=backend)

    def test_distance_254_is_fine(self, backend):
        G = CyclicGroup(1, 509, 1)
        st = bfs_stats(G, close_under_inverses(G, [[0, 1]]), backend=backend)
        assert st.diameter == 254

    @pytest.mark.parametrize("key", sorted(k for k, r in RECORDS.items() if r.order <= 300_000))
    def test_backends_agree(self, key):
        G, S = record_set(key)
        results = {b: bfs_stats(G, S, backend=b) for b in ("numpy", "numba") if b == "numpy" or _kernels.HAS_NUMBA}
        first = next(iter(results.values()))
        for st in results.values():
            assert st == first

    @pytest.mark.parametrize("key", sorted(k for k, r in RECORDS.items() if r.order <= 300_000))
    def test_histogram_invariants(self, key):
        G, S = record_set(key)
        st = bfs_stats(G, S)
        h = st.distance_histogram
        assert h[0] == 1 and h[1] == S.degree
        assert sum(h) == st.reached == st.order
        assert st.diameter == max(d for d, c in enumerate(h) if c)
        for d in range(1, len(h)):
            assert h[d] <= S.degree * (S.degree - 1) ** (d - 1)
        assert st.order <= moore_bound(S.degree, st.diameter)

    def test_env_flag_selects_numpy(self, monkeypatch):
        monkeypatch.setenv("CAYLEYDD_BACKEND", "numpy")
        assert _kernels.default_backend() == "numpy"
        monkeypatch.delenv("CAYLEYDD_BACKEND")
        assert _kernels.default_backend() == ("numba" if _kernels.HAS_NUMBA else "numpy")


class TestOracle:
    def test_s3(self, s3):
        S = close_under_inverses(s3, [[1, 0], [0, 1]])
        assert all_pairs_diameter_oracle(s3, S) == 2

    def test_record_8_3(self):
        G, S = record_set((8, 3))
        assert all_pairs_diameter_oracle(G, S) == 3

    def test_disconnected(self, g1155):
        assert all_pairs_diameter_oracle(g1155, close_under_inverses(g1155, [[0, 1]])) == -1

    def test_too_large(self):
        G, S = record_set((8, 4))
        all_pairs_diameter_oracle(G, S)
        G, S = record_set((5, 8))
        with pytest.raises(TooLarge):
            all_pairs_diameter_oracle(G, S)

    def test_agrees_with_pure_python_oracle(self, dbl36):
        for raw in ([[1, 0, 0, 0], [0, 1, 1, 0]], [[0, 0, 1, 1], [1, 2, 0, 0]], [[1, 1, 1, 1]]):
            S = close_under_inverses(dbl36, raw)
            assert all_pairs_diameter_oracle(dbl36, S) == brute_diameter(dbl36, S.elements)


class TestExport:
    def test_k6(self, s3):
        S = close_under_inverses(s3, all_elements(s3)[1:])
        buf = io.StringIO()
        assert export_graph(s3, S, "edgelist", buf) == 15
        lines = buf.getvalue().splitlines()
        assert len(lines) == 15
        deg = np.zeros(6, int)
        for line in lines:
            u, v = map(int, line.split())
            assert u < v
            deg[u] += 1
            deg[v] += 1
        assert (deg == 5).all()

    def test_record_4_7_edge_count(self):
        G, S = record_set((4, 7))
        # independent count from scalar multiplication
        edges = set()
        for i in range(G.order):
            v = G.unindex(i)
            for s in S.elements:
                j = G.index(G.multiply(v, s))
                edges.add((min(i, j), max(i, j)))
        assert len(edges) == 4 * 1155 // 2 == 2310
        buf = io.StringIO()
        assert export_graph(G, S, "edgelist", buf) == 2310
        got = [tuple(map(int, l.split())) for l in buf.getvalue().splitlines()]
        assert got == sorted(edges)

    def test_dimacs_format(self, s3):
        S = close_under_inverses(s3, [[1, 0], [0, 1]])
        buf = io.StringIO()
        export_graph(s3, S, "dimacs", buf)
        text = buf.getvalue()
        lines = text.split("\n")
        assert lines[0] == "p edge 6 9"
        assert text.endswith("\n") and not text.endswith("\n\n")
        pairs = [tuple(map(int, l.split()[1:])) for l in lines[1:-1]]
        assert all(l.startswith("e ") for l in lines[1:-1])
        assert pairs == sorted(pairs)
        assert min(min(p) for p in pairs) == 1 and max(max(p) for p in pairs) == 6

    def test_edgelist_bytes_and_determinism(self, tmp_path):
        G, S = record_set((6, 4))
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        export_graph(G, S, "edgelist", a)
        export_graph(G, S, "edgelist", b)
        data = a.read_bytes()
        assert data == b.read_bytes()
        assert b"\r" not in data and data.endswith(b"\n") and not data.endswith(b"\n\n")

    @pytest.mark.parametrize("key", [k for k, r in RECORDS.items() if r.order <= 10**4])
    def test_regular(self, key):
        G, S = record_set(key)
        e = edge_array(G, S)
        deg = np.bincount(e.ravel(), minlength=G.order)
        assert (deg == S.degree).all()

    def test_involution_edges_appear_once(self):
        G, S = record_set((7, 5))
        assert len(edge_array(G, S)) == G.order * 7 // 2

    def test_bad_sink(self, s3, tmp_path):
        S = close_under_inverses(s3, [[1, 0]])
        with pytest.raises(SinkError):
            export_graph(s3, S, "edgelist", tmp_path / "missing" / "x.txt")

    def test_bad_format(self, s3):
        with pytest.raises(ValueError):
            export_graph(s3, close_under_inverses(s3, [[1, 0]]), "graphml", io.StringIO())
