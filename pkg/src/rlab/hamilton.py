"""Hamilton cycles and longest paths: exact small-n deciders and a rotation–extension heuristic."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph  # noqa: F401

from rlab.graph import Graph, GraphError
from rlab.rng import as_generator

DP_LIMIT = 22
EXACT_LIMIT = 30


@dataclass(frozen=True)
class HamDecision:
    hamiltonian: bool
    cycle: tuple[int, ...] | None
    method: str
    reason: str = ""
    exact: bool = True


def is_hamilton_cycle(g: Graph, cycle) -> bool:
    cycle = list(cycle)
    if len(cycle) != g.n or len(set(cycle)) != g.n or g.n < 3:
        return False
    return all(g.has_edge(cycle[i], cycle[(i + 1) % g.n]) for i in range(g.n))


def is_path(g: Graph, path) -> bool:
    path = list(path)
    if len(set(path)) != len(path):
        return False
    return all(g.has_edge(path[i], path[i + 1]) for i in range(len(path) - 1))


# ---------------------------------------------------------------------------
# Subset dynamic programming (n <= DP_LIMIT)


@lru_cache(maxsize=None)
def _layers(n: int) -> tuple[np.ndarray, ...]:
    masks = np.arange(1 << n, dtype=np.int64)
    pc = np.bitwise_count(masks)
    order = np.argsort(pc, kind="stable")
    bounds = np.searchsorted(pc[order], np.arange(n + 2))
    return tuple(masks[order[bounds[k]:bounds[k + 1]]] for k in range(n + 1))


def endpoint_table(n: int, adj_bits: list[int], start: int | None = None) -> np.ndarray:
    """``table[mask]`` = bitmask of vertices ``v`` such that some path covers exactly ``mask`` and ends at ``v``.

    With ``start`` given, only paths beginning at ``start`` count.
    """
    if n > DP_LIMIT:
        raise GraphError(f"subset DP limited to n <= {DP_LIMIT}")
    table = np.zeros(1 << n, dtype=np.int64)
    if start is None:
        for v in range(n):
            table[1 << v] = 1 << v
    else:
        table[1 << start] = 1 << start
    adj = np.asarray(adj_bits, dtype=np.int64)
    layers = _layers(n)
    for k in range(1, n):
        src_all = layers[k]
        live = src_all[table[src_all] != 0]
        if len(live) == 0:
            break
        vals = table[live]
        for w in range(n):
            bit = 1 << w
            sel = ((live & bit) == 0) & ((vals & adj[w]) != 0)
            if sel.any():
                table[live[sel] | bit] |= bit
    return table


def _reconstruct(table: np.ndarray, adj_bits: list[int], mask: int, end: int) -> list[int]:
    path = [end]
    while mask & (mask - 1):
        prev = mask ^ (1 << path[-1])
        cand = int(table[prev]) & adj_bits[path[-1]]
        nxt = (cand & -cand).bit_length() - 1
        path.append(nxt)
        mask = prev
    return path[::-1]


def longest_path_exact(g: Graph) -> list[int]:
    """A longest path (as a vertex list) by subset DP, n <= DP_LIMIT."""
    if g.n == 0:
        return []
    table = endpoint_table(g.n, g.adj_bits)
    nz = np.flatnonzero(table)
    pc = np.bitwise_count(nz.astype(np.int64))
    best = int(nz[int(np.argmax(pc))])
    ends = int(table[best])
    end = (ends & -ends).bit_length() - 1
    return _reconstruct(table, g.adj_bits, best, end)


def longest_path_length(g: Graph) -> int:
    """ℓ(G): number of edges of a longest path (exact, n <= DP_LIMIT)."""
    if g.n == 0:
        return 0
    table = endpoint_table(g.n, g.adj_bits)
    return int(np.bitwise_count(np.flatnonzero(table).astype(np.int64)).max()) - 1


def hamilton_cycle_dp(g: Graph) -> list[int] | None:
    n = g.n
    if n < 3:
        return None
    table = endpoint_table(n, g.adj_bits, start=0)
    full = (1 << n) - 1
    closing = int(table[full]) & g.adj_bits[0]
    if not closing:
        return None
    end = (closing & -closing).bit_length() - 1
    return _reconstruct(table, g.adj_bits, full, end)


# ---------------------------------------------------------------------------
# Pruned backtracking (n <= EXACT_LIMIT)


def _articulation_free(g: Graph) -> bool:
    """True iff the connected graph has no cut vertex (iterative Tarjan)."""
    n = g.n
    adj = g.adj
    disc = [-1] * n
    low = [0] * n
    timer = 0
    disc[0] = low[0] = timer
    timer += 1
    stack = [(0, -1, iter(adj[0]))]
    root_children = 0
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if disc[w] == -1:
                disc[w] = low[w] = timer
                timer += 1
                stack.append((w, v, iter(adj[w])))
                if v == 0:
                    root_children += 1
                advanced = True
                break
            if w != parent:
                low[v] = min(low[v], disc[w])
        if advanced:
            continue
        stack.pop()
        if stack:
            p = stack[-1][0]
            low[p] = min(low[p], low[v])
            if p != 0 and low[v] >= disc[p]:
                return False
    return root_children <= 1


def structural_obstruction(g: Graph) -> str | None:
    """A cheap reason why ``g`` cannot be Hamiltonian, or None."""
    if g.n < 3:
        return "fewer than 3 vertices"
    if g.min_degree < 2:
        return f"vertex of degree {g.min_degree}"
    if not g.is_connected():
        return "disconnected"
    if not _articulation_free(g):
        return "cut vertex"
    side = _bipartition(g)
    if side is not None and 2 * int(side.sum()) != g.n:
        return "bipartite with unequal sides"
    return None


def _bipartition(g: Graph) -> np.ndarray | None:
    """Side labels of a connected bipartite graph, or None if not bipartite."""
    colour = np.full(g.n, -1, dtype=np.int64)
    colour[0] = 0
    order = sp.csgraph.breadth_first_order(g.sparse, 0, directed=False, return_predecessors=False)
    adj = g.adj
    for v in order.tolist():
        for w in adj[v]:
            if colour[w] < 0:
                colour[w] = 1 - colour[v]
            elif colour[w] == colour[v]:
                return None
    return colour


def _backtrack(g: Graph, node_budget: int | None) -> list[int] | None:
    n = g.n
    adjb = g.adj_bits
    full = (1 << n) - 1
    start = int(np.argmin(g.degrees))
    path = [start]
    nodes = [0]

    def pc(x: int) -> int:
        return x.bit_count() if hasattr(x, "bit_count") else bin(x).count("1")

    def ok(visited: int, end: int) -> bool:
        rem = full & ~visited
        if not rem:
            return True
        allowed = rem | (1 << end) | (1 << start)
        x = rem
        while x:
            b = x & -x
            u = b.bit_length() - 1
            x ^= b
            if pc(adjb[u] & allowed) < 2:
                return False
        if not adjb[end] & rem or not adjb[start] & rem:
            return False
        # remaining vertices must hang together (they all lie on one path segment)
        seen = rem & -rem
        frontier = seen
        while frontier:
            nxt = 0
            y = frontier
            while y:
                b = y & -y
                y ^= b
                nxt |= adjb[b.bit_length() - 1]
            nxt &= rem & ~seen
            seen |= nxt
            frontier = nxt
        return seen == rem

    def dfs(end: int, visited: int) -> bool:
        nodes[0] += 1
        if node_budget is not None and nodes[0] > node_budget:
            raise TimeoutError
        if visited == full:
            return bool(adjb[end] >> start & 1)
        rem = full & ~visited
        cands = []
        x = adjb[end] & rem
        while x:
            b = x & -x
            x ^= b
            w = b.bit_length() - 1
            cands.append((pc(adjb[w] & rem), w))
        cands.sort()
        for _, w in cands:
            nv = visited | (1 << w)
            if not ok(nv, w):
                continue
            path.append(w)
            if dfs(w, nv):
                return True
            path.pop()
        return False

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * n + 100))
    try:
        found = dfs(start, 1 << start)
    finally:
        sys.setrecursionlimit(old)
    return list(path) if found else None


def is_hamiltonian_exact(g: Graph, *, node_budget: int | None = None) -> HamDecision:
    """Exact decision for n <= 30: subset DP up to 22 vertices, pruned backtracking above."""
    if g.n > EXACT_LIMIT:
        raise GraphError(f"exact Hamiltonicity limited to n <= {EXACT_LIMIT}")
    why = structural_obstruction(g)
    if why:
        return HamDecision(False, None, "structural", why)
    if g.n <= DP_LIMIT:
        cyc = hamilton_cycle_dp(g)
        return HamDecision(cyc is not None, tuple(cyc) if cyc else None, "subset-dp",
                           "" if cyc else "exhaustive subset DP")
    cyc = _backtrack(g, node_budget)
    return HamDecision(cyc is not None, tuple(cyc) if cyc else None, "backtracking",
                       "" if cyc else "exhaustive backtracking")


# ---------------------------------------------------------------------------
# Randomised rotation–extension


def _rotation_walk(adj: list[list[int]], n: int, start: int, rng: np.random.Generator, steps: int,
                   want_cycle: bool, path: list[int] | None = None):
    """Extend greedily, rotate at random when stuck.  Returns (path, closed)."""
    if path is None:
        path = [start]
    pos = [-1] * n
    for i, v in enumerate(path):
        pos[v] = i
    best = list(path)
    for _ in range(steps):
        end = path[-1]
        outs = [w for w in adj[end] if pos[w] < 0]
        if outs:
            # prefer the outside neighbour with the fewest outside neighbours
            k = min(sum(1 for y in adj[w] if pos[y] < 0) for w in outs)
            pick = [w for w in outs if sum(1 for y in adj[w] if pos[y] < 0) == k]
            w = pick[int(rng.integers(len(pick)))] if len(pick) > 1 else pick[0]
            pos[w] = len(path)
            path.append(w)
            if len(path) > len(best):
                best = list(path)
            continue
        if len(path) == n and want_cycle and pos[path[0]] >= 0 and path[0] in adj[end] and n >= 3:
            return path, True
        if len(path) == n and not want_cycle:
            return path, False
        chords = [w for w in adj[end] if pos[w] < len(path) - 2]
        if not chords:
            if rng.random() < 0.5:
                path.reverse()
                for i, v in enumerate(path):
                    pos[v] = i
                continue
            break
        w = chords[int(rng.integers(len(chords)))]
        i = pos[w]
        tail = path[i + 1:]
        tail.reverse()
        path[i + 1:] = tail
        for j in range(i + 1, len(path)):
            pos[path[j]] = j
        if rng.random() < 0.02:
            path.reverse()
            for j, v in enumerate(path):
                pos[v] = j
    if want_cycle and len(path) == n and n >= 3 and path[0] in adj[path[-1]]:
        return path, True
    return (best if len(best) > len(path) else path), False


def hamilton_cycle_heuristic(g: Graph, restarts: int = 200, seed=0, *, steps: int | None = None,
                             warm_path=None) -> list[int] | None:
    """Look for a Hamilton cycle by randomised rotation–extension; None if every restart fails."""
    n = g.n
    if structural_obstruction(g):
        return None
    rng = as_generator(seed)
    adj = g.adj
    steps = steps if steps is not None else 30 * n + 200
    for r in range(restarts):
        init = None
        if r == 0 and warm_path is not None:
            init = [v for v in warm_path]
            if not is_path(g, init):
                init = None
        start = int(rng.integers(n)) if init is None else init[0]
        path, closed = _rotation_walk(adj, n, start, rng, steps, True, init)
        if closed and is_hamilton_cycle(g, path):
            return path
    return None


def longest_path_heuristic_path(g: Graph, iters: int = 100, seed=0) -> list[int]:
    """Best path found by rotation–extension restarts (never claims optimality)."""
    n = g.n
    if n == 0:
        return []
    rng = as_generator(seed)
    adj = g.adj
    best: list[int] = [0]
    for _ in range(iters):
        start = int(rng.integers(n))
        path, _ = _rotation_walk(adj, n, start, rng, 20 * n + 100, False)
        if len(path) > len(best):
            best = list(path)
        if len(best) == n:
            break
    return best


def decide_hamiltonian(g: Graph, *, restarts: int = 200, seed=0, warm_path=None) -> HamDecision:
    """Exact answer for n <= 30; above, a found cycle or a flagged heuristic failure."""
    if g.n <= EXACT_LIMIT:
        return is_hamiltonian_exact(g)
    why = structural_obstruction(g)
    if why:
        return HamDecision(False, None, "structural", why)
    cyc = hamilton_cycle_heuristic(g, restarts, seed, warm_path=warm_path)
    if cyc is not None:
        return HamDecision(True, tuple(cyc), "rotation-extension")
    return HamDecision(False, None, "rotation-extension", f"no cycle in {restarts} restarts", exact=False)
