"""Maker–Breaker games on graph boards.

Breaker moves first.  Maker wins the Hamiltonicity game only with an explicit
Hamilton cycle made of Maker edges.  The structured Maker strategy plays a
connectivity game on two Hamilton cycles (spanning-tree pairing) and a
minimum-degree game in parallel, then claims boosters from a reserved part of
the board.
"""

from __future__ import annotations

import copy
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from rlab.graph import Graph, GraphError
from rlab.hamilton import (
    DP_LIMIT,
    decide_hamiltonian,
    is_hamilton_cycle,
    longest_path_exact,
    longest_path_heuristic_path,
)
from rlab.models import cycle_graph, gen_regular_avoiding, gen_two_hamilton_cycles
from rlab.rng import as_generator, child_seed

FREE, MAKER, BREAKER = 0, 1, 2
EXACT_TRACK_LIMIT = DP_LIMIT
"""Up to this size the booster phase tracks an exact longest path."""


def _key(n: int, u: int, v: int) -> int:
    return u * n + v if u < v else v * n + u


class GameState:
    """Board ownership plus Maker's adjacency, updated move by move."""

    def __init__(self, board: Graph):
        self.board = board
        self.n = board.n
        self.keys = board.edge_keys
        self.index = {int(k): i for i, k in enumerate(self.keys.tolist())}
        self.owner = np.zeros(len(self.keys), dtype=np.int8)
        self.maker_adj: list[set[int]] = [set() for _ in range(self.n)]
        self.breaker_deg = np.zeros(self.n, dtype=np.int64)
        self.moves: list[tuple[str, int, int]] = []

    def copy(self) -> "GameState":
        return copy.deepcopy(self)

    def pair(self, key: int) -> tuple[int, int]:
        return divmod(int(key), self.n)

    def is_free(self, key: int) -> bool:
        i = self.index.get(int(key))
        return i is not None and self.owner[i] == FREE

    def owner_of(self, key: int) -> int:
        return int(self.owner[self.index[int(key)]])

    def free_keys(self) -> np.ndarray:
        return self.keys[self.owner == FREE]

    @property
    def exhausted(self) -> bool:
        return not np.any(self.owner == FREE)

    def claim(self, player: str, key: int) -> None:
        i = self.index.get(int(key))
        if i is None:
            raise GraphError(f"{self.pair(key)} is not a board edge")
        if self.owner[i] != FREE:
            raise GraphError(f"{self.pair(key)} is already claimed")
        u, v = self.pair(key)
        if player == "maker":
            self.owner[i] = MAKER
            self.maker_adj[u].add(v)
            self.maker_adj[v].add(u)
        elif player == "breaker":
            self.owner[i] = BREAKER
            self.breaker_deg[u] += 1
            self.breaker_deg[v] += 1
        else:
            raise GraphError(f"unknown player {player!r}")
        self.moves.append((player, u, v))

    def maker_keys(self) -> np.ndarray:
        return self.keys[self.owner == MAKER]

    def breaker_keys(self) -> np.ndarray:
        return self.keys[self.owner == BREAKER]

    def maker_graph(self) -> Graph:
        return Graph.from_keys(self.n, self.maker_keys())

    def maker_connected(self) -> bool:
        seen = {0}
        q = deque([0])
        while q:
            x = q.popleft()
            for y in self.maker_adj[x]:
                if y not in seen:
                    seen.add(y)
                    q.append(y)
        return len(seen) == self.n


# ---------------------------------------------------------------------------
# Boards with the decomposition used by the structured Maker


@dataclass
class Decomposition:
    n: int
    c1: list[int]
    c2: list[int]
    g12: Graph
    g2: Graph

    @property
    def board(self) -> Graph:
        return cycle_graph(self.n, self.c1).union(cycle_graph(self.n, self.c2)).union(self.g12).union(self.g2)

    def parts(self) -> list[Graph]:
        return [cycle_graph(self.n, self.c1), cycle_graph(self.n, self.c2), self.g12, self.g2]


def build_board(n: int, d1: int, d2: int, seed) -> Decomposition:
    """Two Hamilton cycles plus a (d1-4)-regular graph (together d1-regular) and a disjoint d2-regular graph."""
    if d1 < 4:
        raise GraphError("d1 must be at least 4")
    rng = as_generator(seed)
    c1, c2, ham = gen_two_hamilton_cycles(n, rng)
    g12 = gen_regular_avoiding(n, d1 - 4, ham, rng) if d1 > 4 else Graph.empty(n)
    g2 = gen_regular_avoiding(n, d2, ham.union(g12), rng)
    return Decomposition(n, c1, c2, g12, g2)


def decomposition_from_parts(parts: list[Graph]) -> Decomposition:
    """Rebuild a decomposition from [C1, C2, G12, G2] graphs (C1, C2 must be Hamilton cycles)."""
    if len(parts) != 4:
        raise GraphError("need four parts: C1, C2, G12, G2")
    n = parts[0].n
    orders = []
    for c in parts[:2]:
        if not (c.is_regular() and c.max_degree == 2 and c.is_connected() and c.m == n):
            raise GraphError("C1 and C2 must be Hamilton cycles")
        order, prev = [0], -1
        while len(order) < n:
            nxt = [w for w in c.adj[order[-1]] if w != prev][0]
            prev = order[-1]
            order.append(nxt)
        orders.append(order)
    total = sum(p.m for p in parts)
    dec = Decomposition(n, orders[0], orders[1], parts[2], parts[3])
    if dec.board.m != total:
        raise GraphError("parts are not edge-disjoint")
    return dec


def decomposition_from_union(g1: Graph, g2: Graph, seed=0, restarts: int = 400) -> Decomposition:
    """Split a union board: two edge-disjoint Hamilton cycles are searched inside ``g1``."""
    if g1.n != g2.n:
        raise GraphError("parts must share the vertex set")
    if g1.union(g2).m != g1.m + g2.m:
        raise GraphError("parts are not edge-disjoint")
    rest, cycles = g1, []
    for i in range(2):
        dec = decide_hamiltonian(rest, restarts=restarts, seed=child_seed(seed, "split", i))
        if not dec.hamiltonian:
            raise RuntimeError(f"no Hamilton cycle found for tree {i + 1} inside the first part")
        cycles.append(list(dec.cycle))
        rest = rest.difference(cycle_graph(g1.n, dec.cycle))
    return Decomposition(g1.n, cycles[0], cycles[1], rest, g2)


# ---------------------------------------------------------------------------
# Paths inside Maker's graph


def _extend(adj: list[set[int]], path: list[int], on: set[int]) -> list[int]:
    for _ in range(2):
        grew = True
        while grew:
            grew = False
            for w in sorted(adj[path[-1]]):
                if w not in on:
                    path.append(w)
                    on.add(w)
                    grew = True
                    break
        path.reverse()
    return path


def _closure_levels(adj: list[set[int]], path: list[int]):
    """Yield (endpoint, witness path) level by level, start fixed."""
    t = len(path) - 1
    seen = {path[-1]}
    level = [tuple(path)]
    yield [(path[-1], tuple(path))]
    while level:
        nxt = []
        for p in level:
            pos = {v: i for i, v in enumerate(p)}
            for w in sorted(adj[p[-1]]):
                i = pos.get(w)
                if i is None or i > t - 2:
                    continue
                e = p[i + 1]
                if e in seen:
                    continue
                seen.add(e)
                nxt.append(p[: i + 1] + p[i + 1:][::-1])
        if nxt:
            yield [(p[-1], p) for p in nxt]
        level = nxt


# ---------------------------------------------------------------------------
# Maker strategies


class Thm6Maker:
    """Connectivity game + degree game in parallel, then booster claims from G2."""

    name = "thm6"

    def __init__(self, dec: Decomposition, k: int | None = None):
        n = dec.n
        self.n = n
        self.dec = dec
        d1 = 4 + (dec.g12.max_degree if dec.g12.m else 0)
        self.k = max(1, math.ceil((d1 - 4) / 5)) if k is None else k
        path_keys = lambda order: {_key(n, order[i], order[i + 1]) for i in range(n - 1)}
        self.trees = [path_keys(dec.c1), path_keys(dec.c2)]
        self.conn = set(cycle_graph(n, dec.c1).edge_keys.tolist()) | set(cycle_graph(n, dec.c2).edge_keys.tolist())
        self.g12 = set(dec.g12.edge_keys.tolist())
        self.g2 = set(dec.g2.edge_keys.tolist())
        self.maker_deg12 = np.zeros(n, dtype=np.int64)
        self.breaker_deg12 = np.zeros(n, dtype=np.int64)
        self.conn_owned = 0
        self.degree_failed = False
        self.counts = {"conn": 0, "degree": 0, "booster": 0, "fallback": 0}
        self.path: list[int] | None = None
        self.witness: list[int] | None = None
        self.tags: list[str] = []
        self.lengths: list[int] = []

    # bookkeeping -----------------------------------------------------------
    @property
    def conn_done(self) -> bool:
        return self.conn_owned >= self.n - 1

    @property
    def degree_done(self) -> bool:
        return self.degree_failed or bool(np.all(self.maker_deg12 >= self.k))

    @property
    def phase(self) -> str:
        return "booster" if self.conn_done and self.degree_done else "conn+degree"

    def _take(self, state: GameState, key: int, tag: str) -> int:
        state.claim("maker", key)
        u, v = state.pair(key)
        if key in self.g12:
            self.maker_deg12[u] += 1
            self.maker_deg12[v] += 1
        if key in self.conn:
            self.conn_owned += 1
        self.counts[tag] += 1
        self.tags.append(tag)
        return key

    # connectivity game -----------------------------------------------------
    def _components_without(self, tree: set[int], removed: int) -> np.ndarray:
        n = self.n
        adj = [[] for _ in range(n)]
        for k in tree:
            if k != removed:
                a, b = divmod(k, n)
                adj[a].append(b)
                adj[b].append(a)
        side = np.zeros(n, dtype=bool)
        a = divmod(removed, n)[0]
        side[a] = True
        q = deque([a])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if not side[y]:
                    side[y] = True
                    q.append(y)
        return side

    def _tree_path(self, tree: set[int], a: int, b: int) -> list[int]:
        n = self.n
        adj = [[] for _ in range(n)]
        for k in tree:
            x, y = divmod(k, n)
            adj[x].append(y)
            adj[y].append(x)
        par = {a: -1}
        q = deque([a])
        while q:
            x = q.popleft()
            if x == b:
                break
            for y in adj[x]:
                if y not in par:
                    par[y] = x
                    q.append(y)
        out, x = [], b
        while par[x] != -1:
            out.append(_key(n, x, par[x]))
            x = par[x]
        return out

    def _conn_answer(self, state: GameState, e: int) -> int | None:
        for i in (0, 1):
            if e not in self.trees[i]:
                continue
            other = self.trees[1 - i]
            side = self._components_without(self.trees[i], e)
            cross = sorted(f for f in other if side[f // self.n] != side[f % self.n])
            free = [f for f in cross if state.is_free(f)]
            mine = [f for f in cross if state.owner_of(f) == MAKER]
            if not free and not mine:
                raise AssertionError("spanning-tree pairing invariant broken: no crossing edge")
            f = free[0] if free else mine[0]
            self.trees[i] = (self.trees[i] - {e}) | {f}
            if free:
                return self._take(state, f, "conn")
            return None
        return None

    def _conn_progress(self, state: GameState) -> int | None:
        for i in (0, 1):
            cand = sorted(f for f in self.trees[i] if state.is_free(f))
            if not cand:
                continue
            g = cand[0]
            other = self.trees[1 - i]
            if g not in other:
                a, b = divmod(g, self.n)
                cyc = self._tree_path(other, a, b)
                h = next(x for x in cyc if state.owner_of(x) != MAKER)
                self.trees[1 - i] = (other - {h}) | {g}
            return self._take(state, g, "conn")
        return None

    # degree game -----------------------------------------------------------
    def _degree_move(self, state: GameState) -> int | None:
        n = self.n
        deficient = np.flatnonzero(self.maker_deg12 < self.k)
        if len(deficient) == 0:
            return None
        danger = self.breaker_deg12 - 2 * self.maker_deg12
        for v in sorted(deficient.tolist(), key=lambda x: (-danger[x], x)):
            opts = [w for w in self.dec.g12.adj[v] if state.is_free(_key(n, v, w))]
            if not opts:
                continue
            w = min(opts, key=lambda x: (self.maker_deg12[x] >= self.k, -danger[x], x))
            return self._take(state, _key(n, v, w), "degree")
        self.degree_failed = True
        return None

    # booster phase ---------------------------------------------------------
    def _booster_move(self, state: GameState) -> int | None:
        n, adj = self.n, state.maker_adj
        if self.path is None or n <= EXACT_TRACK_LIMIT:
            # small boards: exact decisions keep every claim a genuine booster
            g = state.maker_graph()
            res = decide_hamiltonian(g, restarts=1, seed=0) if n <= 30 else None
            if res is not None and res.hamiltonian:
                self.witness = list(res.cycle)
                return None
            if n <= EXACT_TRACK_LIMIT:
                self.path = longest_path_exact(g)
            else:
                self.path = longest_path_heuristic_path(g, iters=3, seed=0)
        path = _extend(adj, list(self.path), set(self.path))
        self.path = path
        if len(path) == n and path[0] in adj[path[-1]]:
            self.witness = list(path)
            return None
        on = set(path)
        outside = [x for x in range(n) if x not in on]
        for p in (path, path[::-1]):
            v0 = p[0]
            for level in _closure_levels(adj, list(p)):
                cands = []
                for u, wp in level:
                    k = _key(n, v0, u)
                    if u not in adj[v0] and k in self.g2 and state.is_free(k):
                        cands.append((min(v0, u), max(v0, u), "close", u, wp))
                    for x in outside:
                        k = _key(n, u, x)
                        if k in self.g2 and state.is_free(k):
                            cands.append((min(u, x), max(u, x), "extend", x, wp))
                if not cands:
                    continue
                a, b, kind, other, wp = min(cands, key=lambda c: (c[0], c[1]))
                before = len(path)
                self._take(state, _key(n, a, b), "booster")
                if kind == "extend":
                    self.path = list(wp) + [other]
                else:
                    cyc = list(wp)
                    if len(cyc) == n:
                        self.witness = cyc
                    else:
                        cset = set(cyc)
                        for idx, y in enumerate(cyc):
                            x = next((z for z in sorted(adj[y]) if z not in cset), None)
                            if x is not None:
                                self.path = cyc[idx + 1:] + cyc[: idx + 1] + [x]
                                break
                if self.witness is None and len(self.path) <= before:
                    raise AssertionError("booster claim did not lengthen the path")
                self.lengths.append(n if self.witness is not None else len(self.path) - 1)
                return _key(n, a, b)
        # fallback: a reserved edge at an end of the path, else any reserved edge
        ends = {path[0], path[-1]}
        free2 = [k for k in sorted(self.g2) if state.is_free(k)]
        pick = next((k for k in free2 if k // n in ends or k % n in ends), free2[0] if free2 else None)
        if pick is None:
            return None
        return self._take(state, pick, "fallback")

    # driver ----------------------------------------------------------------
    def observe(self, state: GameState, key: int) -> None:
        if key in self.g12:
            u, v = state.pair(key)
            self.breaker_deg12[u] += 1
            self.breaker_deg12[v] += 1

    def move(self, state: GameState, last: int | None) -> int | None:
        if last is not None:
            self.observe(state, last)
        if self.witness is not None:
            return None
        order = []
        if last is not None and last in self.conn and not self.conn_done:
            got = self._conn_answer(state, last)
            if got is not None:
                return got
            order = ["conn", "degree"]
        elif last is not None and last in self.g12 and not self.degree_done:
            order = ["degree", "conn"]
        else:
            order = ["conn", "degree"]
        for part in order:
            if part == "conn" and not self.conn_done:
                got = self._conn_progress(state)
            elif part == "degree" and not self.degree_done:
                got = self._degree_move(state)
            else:
                continue
            if got is not None:
                return got
        got = self._booster_move(state)
        if got is not None or self.witness is not None:
            return got
        free = state.free_keys()
        return self._take(state, int(free[0]), "fallback") if len(free) else None


class GreedyBoosterMaker:
    """Claims the lowest free edge that is a booster of Maker's graph (exact for n <= 10)."""

    name = "greedy-booster"

    def __init__(self):
        self.witness = None

    def move(self, state: GameState, last) -> int | None:
        from rlab.posa import boosters

        n = state.n
        g = state.maker_graph()
        if n <= 30 and g.m >= n:
            dec = decide_hamiltonian(g)
            if dec.hamiltonian:
                self.witness = list(dec.cycle)
                return None
        mode = "exact" if n <= 10 else "witnessed"
        bs = boosters(g, mode) if g.m else None
        free = state.free_keys()
        if len(free) == 0:
            return None
        if bs is not None:
            for a, b in sorted(bs.pairs):
                k = _key(n, a, b)
                if state.is_free(k):
                    state.claim("maker", k)
                    return k
        deg = np.array([len(s) for s in state.maker_adj])
        k = int(min(free.tolist(), key=lambda x: (deg[x // n] + deg[x % n], x)))
        state.claim("maker", k)
        return k


class LehmanMaker:
    """The spanning-tree pairing alone, on a board given as two edge-disjoint spanning trees."""

    name = "lehman"

    def __init__(self, t1: Graph, t2: Graph):
        n = t1.n
        dec = Decomposition(n, list(range(n)), list(range(n)), Graph.empty(n), Graph.empty(n))
        self.inner = Thm6Maker.__new__(Thm6Maker)
        self.inner.n = n
        self.inner.dec = dec
        self.inner.trees = [set(t1.edge_keys.tolist()), set(t2.edge_keys.tolist())]
        self.inner.conn = self.inner.trees[0] | self.inner.trees[1]
        self.inner.conn_owned = 0
        self.inner.counts = {"conn": 0, "degree": 0, "booster": 0, "fallback": 0}
        self.inner.tags = []
        self.inner.g12 = set()
        self.witness = None

    def move(self, state: GameState, last) -> int | None:
        m = self.inner
        if m.conn_done:
            return None
        if last is not None and last in m.conn:
            got = m._conn_answer(state, last)
            if got is not None:
                return got
        return m._conn_progress(state)


class DegreeGameMaker:
    """Danger-greedy minimum-degree game on the whole board."""

    name = "degree"

    def __init__(self, board: Graph, k: int):
        n = board.n
        dec = Decomposition(n, list(range(n)), list(range(n)), board, Graph.empty(n))
        m = Thm6Maker.__new__(Thm6Maker)
        m.n, m.dec, m.k = n, dec, k
        m.g12 = set(board.edge_keys.tolist())
        m.conn = set()
        m.maker_deg12 = np.zeros(n, dtype=np.int64)
        m.breaker_deg12 = np.zeros(n, dtype=np.int64)
        m.degree_failed = False
        m.counts = {"conn": 0, "degree": 0, "booster": 0, "fallback": 0}
        m.tags = []
        m.conn_owned = 0
        self.inner = m
        self.witness = None

    def move(self, state: GameState, last) -> int | None:
        if last is not None:
            self.inner.observe(state, last)
        if self.inner.degree_done:
            return None
        return self.inner._degree_move(state)


# ---------------------------------------------------------------------------
# Breaker strategies


class RandomBreaker:
    name = "random"

    def __init__(self, seed):
        self.rng = as_generator(seed)

    def move(self, state: GameState, last) -> int:
        free = state.free_keys()
        k = int(free[int(self.rng.integers(len(free)))])
        state.claim("breaker", k)
        return k


class VertexKiller:
    """Attacks the vertex where Maker can still get the fewest edges."""

    name = "vertex-killer"

    def move(self, state: GameState, last) -> int:
        n = state.n
        free = state.free_keys()
        fu, fv = free // n, free % n
        free_deg = np.bincount(fu, minlength=n) + np.bincount(fv, minlength=n)
        mdeg = np.array([len(s) for s in state.maker_adj])
        pot = mdeg + free_deg
        alive = np.flatnonzero(free_deg > 0)
        v = int(alive[np.lexsort((alive, pot[alive]))[0]])
        at = free[(fu == v) | (fv == v)]
        other = np.where(at // n == v, at % n, at // n)
        k = int(at[np.lexsort((other, pot[other]))[0]])
        state.claim("breaker", k)
        return k


class BoosterBlocker:
    """Claims free edges that would close or extend Maker's current longest path."""

    name = "booster-blocker"

    def __init__(self, seed, probe: int = 30):
        self.rng = as_generator(seed)
        self.path: list[int] | None = None
        self.probe = probe

    def move(self, state: GameState, last) -> int:
        n, adj = state.n, state.maker_adj
        if self.path is None or len(self.path) < 2:
            start = max(range(n), key=lambda v: (len(adj[v]), -v))
            self.path = [start]
        self.path = _extend(adj, list(self.path), set(self.path))
        on = set(self.path)
        seen = 0
        for p in (self.path, self.path[::-1]):
            v0 = p[0]
            for level in _closure_levels(adj, list(p)):
                for u, _ in level:
                    seen += 1
                    cands = [_key(n, v0, u)] if len(p) > 2 else []
                    cands += [_key(n, u, x) for x in state.board.adj[u] if x not in on]
                    for k in sorted(cands):
                        if state.is_free(k):
                            state.claim("breaker", k)
                            return k
                if seen >= self.probe:
                    break
        free = state.free_keys()
        k = int(free[int(self.rng.integers(len(free)))])
        state.claim("breaker", k)
        return k


class CutBuilder:
    """Grows a vertex set and claims the free edges leaving it."""

    name = "cut-builder"

    def __init__(self):
        self.side: set[int] | None = None

    def move(self, state: GameState, last) -> int:
        n = state.n
        if self.side is None:
            self.side = {int(np.argmin(state.board.degrees))}
        while True:
            best = None
            for u in sorted(self.side):
                for w in state.board.adj[u]:
                    if w in self.side:
                        continue
                    k = _key(n, u, w)
                    if state.owner_of(k) == MAKER:
                        best = ("absorb", w)
                        break
                    if state.owner_of(k) == FREE and best is None:
                        best = ("claim", k)
                if best and best[0] == "absorb":
                    break
            if best is None or best[0] == "claim" or len(self.side) >= n - 1:
                break
            self.side.add(best[1])
        if best is not None and best[0] == "claim":
            state.claim("breaker", best[1])
            return best[1]
        free = state.free_keys()
        k = int(free[0])
        state.claim("breaker", k)
        return k


BREAKERS = ("random", "vertex-killer", "booster-blocker", "cut-builder")


def make_breaker(name: str, seed):
    if name == "random":
        return RandomBreaker(seed)
    if name == "vertex-killer":
        return VertexKiller()
    if name == "booster-blocker":
        return BoosterBlocker(seed)
    if name == "cut-builder":
        return CutBuilder()
    raise GraphError(f"unknown breaker {name!r}; expected one of {', '.join(BREAKERS)}")


# ---------------------------------------------------------------------------
# Playing


@dataclass
class GameResult:
    winner: str
    moves: list[tuple[str, int, int]]
    witness: list[int] | None
    maker_edges: list[tuple[int, int]]
    breaker_edges: list[tuple[int, int]]
    diagnostics: list[str] = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    tags: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"winner": self.winner, "moves": [{"player": p, "u": u, "v": v} for p, u, v in self.moves],
                "witness": self.witness, "diagnostics": self.diagnostics, "counts": self.counts}


def _strategy_move(strategy, state: GameState, player: str, last) -> tuple[int | None, str | None]:
    before = len(state.moves)
    try:
        k = strategy.move(state, last)
    except GraphError as exc:
        return None, f"illegal move by {player}: {exc}"
    made = state.moves[before:]
    if k is None and not made:
        return None, None
    if len(made) != 1 or made[0][0] != player:
        return None, f"{player} strategy must claim exactly one edge per turn"
    return k, None


def play(board: Graph, maker, breaker, *, goal: str = "ham", full_board: bool = False,
         restarts: int = 200) -> GameResult:
    """Alternate Breaker then Maker until Maker wins or the board is exhausted."""
    state = GameState(board)
    diag: list[str] = []
    last = None
    winner = None
    witness = None
    while not state.exhausted:
        k, err = _strategy_move(breaker, state, "breaker", last)
        if err:
            diag.append(err)
            winner = "maker"
            break
        last = k
        if state.exhausted:
            break
        k, err = _strategy_move(maker, state, "maker", last)
        if err:
            diag.append(err)
            winner = "breaker"
            break
        if k is None and getattr(maker, "witness", None) is None:
            # Maker passes: take any free edge so the game keeps alternating
            free = state.free_keys()
            state.claim("maker", int(free[0]))
            diag.append("maker passed; lowest free edge claimed")
        w = getattr(maker, "witness", None)
        if w is not None and goal == "ham":
            if is_hamilton_cycle(state.maker_graph(), w):
                witness = list(w)
                if not full_board:
                    winner = "maker"
                    break
            else:
                diag.append("maker claimed an invalid cycle witness")
                maker.witness = None
        if goal == "connect" and state.maker_connected() and not full_board:
            winner = "maker"
            break
    if winner is None:
        if goal == "connect":
            winner = "maker" if state.maker_connected() else "breaker"
        elif witness is not None:
            winner = "maker"
        else:
            dec = decide_hamiltonian(state.maker_graph(), restarts=restarts)
            if dec.hamiltonian:
                witness = list(dec.cycle)
                winner = "maker"
            else:
                winner = "breaker"
                diag.append(f"maker graph not Hamiltonian ({dec.method}{'' if dec.exact else ', presumed'})")
    n = board.n
    inner = getattr(maker, "inner", maker)
    return GameResult(winner, list(state.moves), witness,
                      [divmod(int(k), n) for k in state.maker_keys()],
                      [divmod(int(k), n) for k in state.breaker_keys()], diag,
                      dict(getattr(inner, "counts", {})), list(getattr(inner, "tags", [])))


def replay(board: Graph, moves) -> GameState:
    """Re-apply a transcript, checking legality and Breaker-first alternation."""
    state = GameState(board)
    for i, (player, u, v) in enumerate(moves):
        want = "breaker" if i % 2 == 0 else "maker"
        if player != want:
            raise GraphError(f"move {i} by {player}, expected {want}")
        state.claim(player, _key(board.n, u, v))
    return state


def play_thm6(dec: Decomposition, breaker: str, seed: int, **kw) -> GameResult:
    maker = Thm6Maker(dec)
    res = play(dec.board, maker, make_breaker(breaker, child_seed(seed, "breaker", breaker)), **kw)
    res.counts["k"] = maker.k
    res.counts["lengths"] = list(maker.lengths)
    return res


# ---------------------------------------------------------------------------
# Exhaustive search on tiny boards


def exhaustive_maker_wins(board: Graph, maker_factory, goal) -> tuple[bool, int, list | None]:
    """Does the deterministic Maker strategy win against every Breaker line?

    ``goal(state)`` decides a finished position.  Returns (all won, number of
    leaves, a losing line or None).
    """
    leaves = 0

    def rec(state: GameState, maker, last):
        nonlocal leaves
        if goal(state, final=False):
            leaves += 1
            return None
        free = state.free_keys()
        if len(free) == 0:
            leaves += 1
            return None if goal(state, final=True) else list(state.moves)
        for k in free.tolist():
            s2 = state.copy()
            m2 = copy.deepcopy(maker)
            s2.claim("breaker", k)
            if not s2.exhausted:
                before = len(s2.moves)
                got = m2.move(s2, k)
                if got is None and len(s2.moves) == before:
                    f = s2.free_keys()
                    s2.claim("maker", int(f[0]))
            bad = rec(s2, m2, k)
            if bad is not None:
                return bad
        return None

    bad = rec(GameState(board), maker_factory(), None)
    return bad is None, leaves, bad


def connected_goal(state: GameState, final: bool) -> bool:
    return state.maker_connected()


def min_degree_goal(k: int):
    def goal(state: GameState, final: bool) -> bool:
        return min(len(s) for s in state.maker_adj) >= k

    return goal
