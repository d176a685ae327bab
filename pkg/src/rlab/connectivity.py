"""Exact edge and vertex connectivity by unit-capacity max-flow (Dinic)."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import maximum_flow

from rlab.graph import Graph


def _unit_capacity(g: Graph) -> sp.csr_matrix:
    data = np.ones(len(g.indices), dtype=np.int32)
    return sp.csr_matrix((data, g.indices.astype(np.int32), g.indptr.astype(np.int32)), shape=(g.n, g.n))


def local_edge_connectivity(g: Graph, s: int, t: int) -> int:
    return int(maximum_flow(_unit_capacity(g), s, t, method="dinic").flow_value)


def edge_connectivity(g: Graph, *, at_most: int | None = None) -> int:
    """Global minimum edge cut.

    Computed as the minimum of ``n - 1`` max-flows from vertex 0.  With
    ``at_most`` the scan stops as soon as a cut of that size or smaller is
    found (the returned value is then only an upper bound equal to that cut).
    """
    n = g.n
    if n <= 1:
        return 0
    if not g.is_connected():
        return 0
    cap = _unit_capacity(g)
    best = g.min_degree
    # the lowest-degree vertex is a natural first target
    for t in range(1, n):
        if best == 0 or (at_most is not None and best <= at_most):
            break
        f = int(maximum_flow(cap, 0, t, method="dinic").flow_value)
        best = min(best, f)
    return best


def is_k_edge_connected(g: Graph, k: int) -> bool:
    if k <= 0:
        return True
    return edge_connectivity(g, at_most=k - 1) >= k


def _split_network(g: Graph) -> sp.csr_matrix:
    """Vertex v becomes arc 2v -> 2v+1 of capacity 1; edges become big arcs out -> in."""
    n = g.n
    big = n
    e = g.edges()
    rows = np.concatenate([2 * np.arange(n), 2 * e[:, 0] + 1, 2 * e[:, 1] + 1])
    cols = np.concatenate([2 * np.arange(n) + 1, 2 * e[:, 1], 2 * e[:, 0]])
    data = np.concatenate([np.ones(n, dtype=np.int32), np.full(2 * len(e), big, dtype=np.int32)])
    return sp.csr_matrix((data, (rows.astype(np.int32), cols.astype(np.int32))), shape=(2 * n, 2 * n))


def local_vertex_connectivity(g: Graph, s: int, t: int, network: sp.csr_matrix | None = None) -> int:
    """Minimum number of vertices separating non-adjacent ``s`` and ``t``."""
    net = _split_network(g) if network is None else network
    return int(maximum_flow(net, 2 * s + 1, 2 * t, method="dinic").flow_value)


def vertex_connectivity(g: Graph, *, at_most: int | None = None) -> int:
    """Exact vertex connectivity (K_n has n - 1 by convention).

    Even's scheme: scan sources v_0, v_1, ... while their index does not
    exceed the current best, flowing to every later non-neighbour.
    """
    n = g.n
    if n <= 1:
        return 0
    if g.m == n * (n - 1) // 2:
        return n - 1
    if not g.is_connected():
        return 0
    net = _split_network(g)
    best = g.min_degree
    adj = g.adj_sets
    for i in range(n):
        if i > best or (at_most is not None and best <= at_most):
            break
        for j in range(i + 1, n):
            if j in adj[i]:
                continue
            best = min(best, local_vertex_connectivity(g, i, j, net))
            if at_most is not None and best <= at_most:
                break
    return best


def is_k_vertex_connected(g: Graph, k: int) -> bool:
    if k <= 0:
        return True
    if g.n <= k:
        return False
    return vertex_connectivity(g, at_most=k - 1) >= k
