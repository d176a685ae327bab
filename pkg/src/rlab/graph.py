"""Immutable simple graphs on ``[n]`` plus the elementary set/degree/density operations.

Adjacency is stored in CSR form (``indptr``/``indices``) with every neighbour
list sorted, so two graphs with the same edge set compare equal and edge
queries are a binary search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class GraphError(ValueError):
    """Raised for malformed graphs or invalid graph operations."""


def _as_index_array(vs: Iterable[int]) -> np.ndarray:
    if isinstance(vs, np.ndarray):
        return np.flatnonzero(vs) if vs.dtype == bool else vs.astype(np.int64)
    return np.fromiter((int(v) for v in vs), dtype=np.int64)


class Graph:
    """A simple undirected graph with vertices ``0..n-1``.

    Instances are immutable; every operation returning a graph builds a new one.
    """

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray, *, _trusted: bool = False):
        self.n = int(n)
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        if not _trusted:
            _check_csr(self.n, indptr, indices)
        indptr.setflags(write=False)
        indices.setflags(write=False)
        self.indptr = indptr
        self.indices = indices
        self.m = len(indices) // 2

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges, *, dedupe: bool = False) -> "Graph":
        """Build from an iterable/array of ``(u, v)`` pairs.

        Loops are always rejected.  Repeated edges are rejected unless
        ``dedupe`` is set, in which case they are collapsed.
        """
        arr = np.asarray(edges if not isinstance(edges, (set, frozenset)) else list(edges), dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise GraphError("edges must be a sequence of pairs")
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise GraphError("edge endpoint out of range")
        u = np.minimum(arr[:, 0], arr[:, 1])
        v = np.maximum(arr[:, 0], arr[:, 1])
        if np.any(u == v):
            raise GraphError("self-loops are not allowed")
        keys = u * n + v
        ukeys = np.unique(keys)
        if len(ukeys) != len(keys) and not dedupe:
            raise GraphError("parallel edges are not allowed")
        return cls.from_keys(n, ukeys)

    @classmethod
    def from_keys(cls, n: int, keys: np.ndarray) -> "Graph":
        """Build from sorted unique edge keys ``u*n+v`` with ``u < v``."""
        keys = np.asarray(keys, dtype=np.int64)
        u = keys // n if n else keys
        v = keys % n if n else keys
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        order = np.lexsort((cols, rows))
        rows = rows[order]
        cols = cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(n, indptr, cols, _trusted=True)

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]]) -> "Graph":
        n = len(adj)
        edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
        g = cls.from_edges(n, edges)
        if any(sorted(set(adj[u])) != g.adj[u] for u in range(n)):
            raise GraphError("adjacency is not symmetric")
        return g

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64), _trusted=True)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, list(itertools.combinations(range(n), 2)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def petersen(cls) -> "Graph":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return cls.from_edges(10, outer + spokes + inner)

    # -- basic queries ------------------------------------------------------

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.indptr)
        d.setflags(write=False)
        return d

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    @property
    def min_degree(self) -> int:
        return int(self.degrees.min()) if self.n else 0

    def is_regular(self) -> bool:
        return self.n == 0 or self.max_degree == self.min_degree

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < len(row) and row[i] == v)

    @cached_property
    def adj(self) -> list[list[int]]:
        """Neighbour lists as plain Python lists (for pure-Python kernels)."""
        ind = self.indices.tolist()
        ptr = self.indptr.tolist()
        return [ind[ptr[v]:ptr[v + 1]] for v in range(self.n)]

    @cached_property
    def adj_sets(self) -> list[frozenset[int]]:
        return [frozenset(a) for a in self.adj]

    @cached_property
    def adj_bits(self) -> list[int]:
        """Neighbourhoods as Python-int bitmasks."""
        out = []
        for a in self.adj:
            b = 0
            for w in a:
                b |= 1 << w
            out.append(b)
        return out

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """Sorted int64 keys ``u*n+v`` (``u < v``), one per edge."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        mask = rows < self.indices
        k = rows[mask] * self.n + self.indices[mask]
        k.setflags(write=False)
        return k

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        k = self.edge_keys
        return np.stack([k // self.n, k % self.n], axis=1) if self.n else np.zeros((0, 2), dtype=np.int64)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges()]

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edge_list())

    @cached_property
    def sparse(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    # -- set statistics -----------------------------------------------------

    def _mask(self, vs) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[_as_index_array(vs)] = True
        return m

    def e_inside(self, U) -> int:
        """Number of edges with both endpoints in ``U``."""
        x = self._mask(U).astype(np.float64)
        return int(round(x @ (self.sparse @ x))) // 2

    def e_between(self, U, W) -> int:
        """Number of edges with one endpoint in ``U`` and the other in ``W``.

        ``U`` and ``W`` are expected to be disjoint.
        """
        x = self._mask(U).astype(np.float64)
        y = self._mask(W).astype(np.float64)
        return int(round(x @ (self.sparse @ y)))

    def degree_into(self, u: int, W) -> int:
        return int(np.count_nonzero(self._mask(W)[self.neighbors(u)]))

    def neighborhood(self, U) -> np.ndarray:
        """External neighbourhood: vertices outside ``U`` adjacent to ``U``."""
        mask = self._mask(U)
        idx = np.flatnonzero(mask)
        if len(idx) == 0:
            return idx
        nb = np.concatenate([self.neighbors(v) for v in idx])
        hit = np.zeros(self.n, dtype=bool)
        hit[nb] = True
        hit &= ~mask
        return np.flatnonzero(hit)

    def components(self) -> list[list[int]]:
        ncomp, labels = sp.csgraph.connected_components(self.sparse, directed=False)
        out: list[list[int]] = [[] for _ in range(ncomp)]
        for v, c in enumerate(labels.tolist()):
            out[c].append(v)
        return out

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        ncomp, _ = sp.csgraph.connected_components(self.sparse, directed=False)
        return ncomp == 1

    def induced(self, U) -> "Graph":
        """Subgraph on the same vertex set keeping only edges inside ``U``."""
        mask = self._mask(U)
        e = self.edges()
        keep = mask[e[:, 0]] & mask[e[:, 1]]
        return Graph.from_keys(self.n, self.edge_keys[keep])

    # -- edge-set algebra ---------------------------------------------------

    def add_edges(self, edges) -> "Graph":
        extra = Graph.from_edges(self.n, edges, dedupe=True)
        return Graph.from_keys(self.n, np.union1d(self.edge_keys, extra.edge_keys))

    def union(self, other: "Graph") -> "Graph":
        _same_n(self, other)
        return Graph.from_keys(self.n, np.union1d(self.edge_keys, other.edge_keys))

    def difference(self, other: "Graph") -> "Graph":
        _same_n(self, other)
        return self.remove_keys(other.edge_keys)

    def remove_keys(self, keys: np.ndarray) -> "Graph":
        """Drop the given edge keys (keys absent from the graph are ignored)."""
        keys = np.asarray(keys, dtype=np.int64)
        if len(keys) == 0:
            return self
        n = self.n
        u, v = keys // n, keys % n
        # directed keys of the CSR layout are globally sorted
        rows = np.repeat(np.arange(n, dtype=np.int64), self.degrees)
        dkeys = rows * n + self.indices
        kill = np.concatenate([u * n + v, v * n + u])
        p = np.searchsorted(dkeys, kill)
        found = p < len(dkeys)
        found[found] = dkeys[p[found]] == kill[found]
        keep = np.ones(len(dkeys), dtype=bool)
        keep[p[found]] = False
        new_rows = rows[keep]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(new_rows, minlength=n), out=indptr[1:])
        return Graph(n, indptr, self.indices[keep], _trusted=True)

    def contains_keys(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        p = np.searchsorted(self.edge_keys, keys)
        ok = p < len(self.edge_keys)
        ok[ok] = self.edge_keys[p[ok]] == keys[ok]
        return ok

    def is_subgraph_of(self, other: "Graph") -> bool:
        return self.n == other.n and bool(np.all(other.contains_keys(self.edge_keys)))

    # -- dunder -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.indices, other.indices) and np.array_equal(self.indptr, other.indptr)

    def __hash__(self) -> int:
        return hash((self.n, self.edge_keys.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _same_n(a: Graph, b: Graph) -> None:
    if a.n != b.n:
        raise GraphError(f"vertex counts differ: {a.n} vs {b.n}")


def _check_csr(n: int, indptr: np.ndarray, indices: np.ndarray) -> None:
    if len(indptr) != n + 1 or indptr[0] != 0 or indptr[-1] != len(indices):
        raise GraphError("malformed indptr")
    if np.any(np.diff(indptr) < 0):
        raise GraphError("malformed indptr")
    if len(indices) and (indices.min() < 0 or indices.max() >= n):
        raise GraphError("neighbour out of range")
    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    if np.any(rows == indices):
        raise GraphError("self-loops are not allowed")
    dk = rows * n + indices
    if len(dk) > 1 and np.any(np.diff(dk) <= 0):
        raise GraphError("neighbour lists must be sorted and duplicate-free")
    rk = np.sort(indices * n + rows)
    if not np.array_equal(rk, dk):
        raise GraphError("adjacency is not symmetric")


# ---------------------------------------------------------------------------
# Partitions and the induced bipartite subgraph


@dataclass(frozen=True)
class Partition:
    """Two-sided vertex partition; ``side[v]`` is 1 or 2."""

    side: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (1, 2) for s in self.side):
            raise GraphError("partition labels must be 1 or 2")

    @classmethod
    def from_sets(cls, n: int, first: Iterable[int]) -> "Partition":
        side = [2] * n
        for v in first:
            side[v] = 1
        return cls(tuple(side))

    @property
    def n(self) -> int:
        return len(self.side)

    @property
    def sizes(self) -> tuple[int, int]:
        a = sum(1 for s in self.side if s == 1)
        return a, self.n - a

    def part(self, label: int) -> list[int]:
        return [v for v, s in enumerate(self.side) if s == label]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.side, dtype=np.int8)


def induced_bipartite(g: Graph, p: Partition) -> Graph:
    """Keep exactly the edges of ``g`` whose endpoints lie on opposite sides."""
    if p.n != g.n:
        raise GraphError(f"partition covers {p.n} vertices, graph has {g.n}")
    side = p.as_array()
    e = g.edges()
    keep = side[e[:, 0]] != side[e[:, 1]]
    return Graph.from_keys(g.n, g.edge_keys[keep])


def remove_subgraph(g: Graph, h: Graph) -> tuple[Graph, int]:
    """Return ``(g - h, Δ(h))``; every edge of ``h`` must belong to ``g``."""
    _same_n(g, h)
    if not h.is_subgraph_of(g):
        missing = h.edge_keys[~g.contains_keys(h.edge_keys)][0]
        raise GraphError(f"edge ({missing // g.n}, {missing % g.n}) of h is not in g")
    return g.remove_keys(h.edge_keys), h.max_degree


# ---------------------------------------------------------------------------
# Maximal density of small sets


@dataclass(frozen=True)
class DensityReport:
    witness: tuple[int, ...]
    ratio: Fraction
    exact: bool
    tau: int


EXACT_TAU_LIMIT = 20
_FULL_ENUM_LIMIT = 22
_BRANCH_BUDGET = 2_000_000


def _all_mask_edge_counts(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Edge counts e(U) and sizes |U| for every vertex mask (n <= 22)."""
    n = g.n
    e = np.zeros(1 << n, dtype=np.int32)
    size = np.zeros(1 << n, dtype=np.int32)
    for b in range(n):
        lo = np.arange(1 << b, dtype=np.int64)
        nb = g.adj_bits[b] & ((1 << b) - 1)
        e[(1 << b):(1 << (b + 1))] = e[: 1 << b] + np.bitwise_count(lo & nb)
        size[(1 << b):(1 << (b + 1))] = size[: 1 << b] + 1
    return e, size


def _connected_sets(g: Graph, tau: int, budget: int):
    """Enumerate connected vertex sets of size <= tau (ESU enumeration).

    Yields ``(set_as_tuple, edges_inside)``; raises ``_BudgetExceeded`` after
    ``budget`` sets.
    """
    adj = g.adj
    count = 0
    for v in range(g.n):
        stack = [((v,), frozenset(w for w in adj[v] if w > v), 0)]
        while stack:
            sub, ext, e_in = stack.pop()
            count += 1
            if count > budget:
                raise _BudgetExceeded
            yield sub, e_in
            if len(sub) == tau:
                continue
            ext_list = sorted(ext)
            subset = set(sub)
            nbhd = set()
            for x in sub:
                nbhd.update(adj[x])
            for i, w in enumerate(ext_list):
                rest = frozenset(ext_list[i + 1:])
                new_ext = set(rest)
                for y in adj[w]:
                    if y > v and y not in subset and y not in nbhd:
                        new_ext.add(y)
                e_w = sum(1 for y in adj[w] if y in subset)
                stack.append((sub + (w,), frozenset(new_ext), e_in + e_w))


class _BudgetExceeded(Exception):
    pass


def _peel_witness(g: Graph, tau: int) -> tuple[tuple[int, ...], Fraction]:
    """Greedy lower-bound witness: grow from every vertex, keep the best prefix."""
    adj = g.adj_sets
    best: tuple[tuple[int, ...], Fraction] = ((0,), Fraction(0)) if g.n else ((), Fraction(0))
    for s in range(g.n):
        U = [s]
        inset = {s}
        e = 0
        gain: dict[int, int] = {}
        for w in adj[s]:
            gain[w] = 1
        while len(U) < tau and gain:
            w = max(gain, key=lambda x: (gain[x], -x))
            e += gain.pop(w)
            U.append(w)
            inset.add(w)
            for y in adj[w]:
                if y not in inset:
                    gain[y] = gain.get(y, 0) + 1
            r = Fraction(e, len(U))
            if r > best[1]:
                best = (tuple(sorted(U)), r)
    return best


def density_rho(g: Graph, tau: int, *, budget: int = _BRANCH_BUDGET) -> DensityReport:
    """Maximal ``e(U)/|U|`` over vertex sets with ``1 <= |U| <= tau``.

    Exact when ``tau <= 20`` and the search finishes: graphs with at most 22
    vertices are enumerated mask by mask, larger ones by enumerating connected
    sets (an optimal witness can always be taken connected).  Otherwise a greedy
    growth heuristic returns a valid lower-bound witness with ``exact=False``.
    """
    if not 1 <= tau <= max(g.n, 1):
        raise GraphError(f"tau must lie in [1, {g.n}]")
    if g.n == 0:
        raise GraphError("empty graph")
    if tau <= EXACT_TAU_LIMIT:
        if g.n <= _FULL_ENUM_LIMIT:
            e, size = _all_mask_edge_counts(g)
            ok = (size >= 1) & (size <= tau)
            masks = np.flatnonzero(ok)
            # maximise e/size exactly: compare e_i*s_j across candidates
            ratio = e[masks] / size[masks]
            top = ratio.max()
            cands = masks[np.isclose(ratio, top)]
            best = max(cands.tolist(), key=lambda mk: Fraction(int(e[mk]), int(size[mk])))
            wit = tuple(v for v in range(g.n) if best >> v & 1)
            return DensityReport(wit, Fraction(int(e[best]), int(size[best])), True, tau)
        try:
            best_w: tuple[int, ...] = (0,)
            best_r = Fraction(0)
            for sub, e_in in _connected_sets(g, tau, budget):
                if e_in * best_r.denominator > best_r.numerator * len(sub):
                    best_r = Fraction(e_in, len(sub))
                    best_w = tuple(sorted(sub))
            return DensityReport(best_w, best_r, True, tau)
        except _BudgetExceeded:
            pass
    wit, r = _peel_witness(g, tau)
    return DensityReport(wit, r, False, tau)


# ---------------------------------------------------------------------------
# Edge-list interchange format


def format_edgelist(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edge_list())
    return "\n".join(lines) + "\n"


def write_edgelist(g: Graph, path) -> None:
    Path(path).write_text(format_edgelist(g), encoding="ascii")


def parse_edgelist(text: str) -> Graph:
    lines = text.splitlines()
    if not lines:
        raise GraphError("empty edge-list file")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise GraphError("header must be 'n m'") from exc
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != m:
        raise GraphError(f"header declares {m} edges, found {len(body)}")
    edges = []
    for ln in body:
        u, v = (int(x) for x in ln.split())
        if not u < v:
            raise GraphError(f"edge line '{ln}' must satisfy u < v")
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def read_edgelist(path) -> Graph:
    return parse_edgelist(Path(path).read_text(encoding="ascii"))


@dataclass(frozen=True)
class DensityVerdict:
    status: str
    """``certified`` (ρ ≤ limit, exact), ``refuted`` (witness above limit) or ``unknown``."""
    ratio: Fraction | None
    witness: tuple[int, ...]


def density_verdict(g: Graph, tau: int, limit) -> DensityVerdict:
    """Three-valued answer to ``ρ(g, tau) <= limit``."""
    rep = density_rho(g, tau)
    if rep.ratio > limit:
        return DensityVerdict("refuted", rep.ratio, rep.witness)
    if rep.exact:
        return DensityVerdict("certified", rep.ratio, rep.witness)
    return DensityVerdict("unknown", rep.ratio, rep.witness)
