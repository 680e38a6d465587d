"""Implicit Cayley graphs: generator sets, BFS from the identity, export.

Edges are ``{x, x*s}`` (right multiplication) for ``s`` in an inverse-closed,
identity-free generator set.  Cayley graphs are vertex transitive, so one BFS
from the identity gives the eccentricity of every vertex and hence the
diameter.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import (
    ContainsIdentity,
    DistanceOverflow,
    EmptySet,
    MemoryBudgetExceeded,
    SinkError,
    TooLarge,
)
from .groups import Element, GroupSpec

log = logging.getLogger(__name__)

# uint8 distance array: one byte per vertex
DEFAULT_MAX_ORDER = 100_000_000
ORACLE_MAX_ORDER = 5000


@dataclass(frozen=True)
class GeneratorSet:
    group: GroupSpec = field(repr=False)
    elements: tuple
    involution_count: int

    @property
    def degree(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return tuple(g) in self.elements

    def as_array(self) -> np.ndarray:
        """Coordinates padded to 4 columns, the layout the kernels expect."""
        out = np.zeros((self.degree, 4), dtype=np.int64)
        for k, s in enumerate(self.elements):
            out[k, : len(s)] = s
        return out

    def to_json(self) -> list:
        return [list(s) for s in self.elements]


@dataclass
class CayleyStats:
    order: int
    degree: int
    diameter: Optional[int]  # None when some vertex is unreachable
    distance_histogram: list
    reached: int
    connected: bool

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "degree": self.degree,
            "diameter": self.diameter,
            "connected": self.connected,
            "reached": self.reached,
            "distance_histogram": list(self.distance_histogram),
        }


def close_under_inverses(group: GroupSpec, raw: Iterable[Sequence[int]]) -> GeneratorSet:
    """Inverse-closed generator set: ``raw`` in input order (deduplicated),
    then the inverses it was missing, in corresponding order."""
    raw = [group.check(g) for g in raw]
    if not raw:
        raise EmptySet("generator list is empty")
    e = group.identity
    if e in raw:
        raise ContainsIdentity("generator set must not contain the identity")
    elements: list = []
    seen: set = set()
    for g in raw:
        if g not in seen:
            seen.add(g)
            elements.append(g)
    for g in list(elements):
        gi = group.inverse(g)
        if gi not in seen:
            seen.add(gi)
            elements.append(gi)
    involutions = sum(1 for g in elements if group.inverse(g) == g)
    return GeneratorSet(group, tuple(elements), involutions)


def neighbors(group: GroupSpec, gens: GeneratorSet, v: Sequence[int]) -> list:
    v = group.check(v)
    return [group.multiply(v, s) for s in gens.elements]


def bfs_stats(
    group: GroupSpec,
    gens: GeneratorSet,
    max_order: int = DEFAULT_MAX_ORDER,
    backend: Optional[str] = None,
) -> CayleyStats:
    """Breadth-first search from the identity over index-encoded vertices."""
    if group.order > max_order:
        raise MemoryBudgetExceeded(
            f"|G| = {group.order} exceeds the vertex budget {max_order}; raise it explicitly"
        )
    dist = np.empty(group.order, dtype=np.uint8)
    hist, overflow = _kernels.bfs_levels(
        group.family_code,
        group.m,
        group.n,
        group.kernel_table(),
        gens.as_array(),
        group.order,
        dist,
        backend=backend,
    )
    if overflow:
        raise DistanceOverflow(f"BFS distance exceeds {_kernels.MAX_DISTANCE} in {group.name}")
    hist = [int(c) for c in hist]
    reached = sum(hist)
    connected = reached == group.order
    return CayleyStats(
        order=group.order,
        degree=gens.degree,
        diameter=len(hist) - 1 if connected else None,
        distance_histogram=hist,
        reached=reached,
        connected=connected,
    )


def adjacency(group: GroupSpec, gens: GeneratorSet) -> np.ndarray:
    """``(|G|, degree)`` neighbour index table built from scalar multiplication."""
    order = group.order
    out = np.empty((order, gens.degree), dtype=np.int64)
    for i in range(order):
        v = group.unindex(i)
        for k, s in enumerate(gens.elements):
            out[i, k] = group.index(group.multiply(v, s))
    return out


def all_pairs_diameter_oracle(group: GroupSpec, gens: GeneratorSet) -> int:
    """Diameter as the maximum eccentricity over all vertices.

    Builds the graph with scalar group multiplication and runs an independent
    BFS from every vertex (scipy's csgraph); it does not assume vertex
    transitivity.  Returns -1 for a disconnected graph.
    """
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import shortest_path

    order = group.order
    if order > ORACLE_MAX_ORDER:
        raise TooLarge(f"oracle limited to |G| <= {ORACLE_MAX_ORDER}, got {order}")
    adj = adjacency(group, gens)
    rows = np.repeat(np.arange(order), gens.degree)
    graph = csr_matrix((np.ones(rows.size), (rows, adj.ravel())), shape=(order, order))
    best = 0
    for start in range(0, order, 512):
        d = shortest_path(graph, unweighted=True, indices=np.arange(start, min(order, start + 512)))
        if np.isinf(d).any():
            return -1
        best = max(best, int(d.max()))
    return best


def edge_array(group: GroupSpec, gens: GeneratorSet) -> np.ndarray:
    """Sorted unique undirected edges ``(u, v)``, ``u < v``, as an ``(M, 2)`` array."""
    idx = np.arange(group.order, dtype=np.int64)
    table = group.kernel_table()
    parts = []
    for g in gens.as_array():
        nb = _kernels.right_multiply(group.family_code, group.m, group.n, table, idx, g)
        parts.append(np.stack([np.minimum(idx, nb), np.maximum(idx, nb)], axis=1))
    edges = np.unique(np.concatenate(parts), axis=0)
    return edges[edges[:, 0] != edges[:, 1]]


def export_graph(group: GroupSpec, gens: GeneratorSet, format: str, sink) -> int:
    """Write the simple undirected Cayley graph; returns the edge count.

    ``sink`` is a path or a text stream.  ``edgelist`` is 0-indexed ``u v``
    lines, ``dimacs`` is a ``p edge N M`` header then 1-indexed ``e u v`` lines.
    Both are sorted by ``(u, v)``.
    """
    if format not in ("edgelist", "dimacs"):
        raise ValueError(f"unknown export format {format!r}")
    edges = edge_array(group, gens)
    if format == "dimacs":
        body = "".join(f"e {u + 1} {v + 1}\n" for u, v in edges.tolist())
        text = f"p edge {group.order} {len(edges)}\n" + body
    else:
        text = "".join(f"{u} {v}\n" for u, v in edges.tolist())
    try:
        if isinstance(sink, (str, Path)):
            with open(sink, "w", newline="\n", encoding="ascii") as fh:
                fh.write(text)
        else:
            sink.write(text)
    except OSError as exc:
        raise SinkError(f"could not write graph: {exc}") from exc
    return len(edges)
