"""Maximum matching in general graphs with a Tutte–Berge deficiency witness."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from rlab.graph import Graph


@dataclass(frozen=True)
class MatchingResult:
    pairs: tuple[tuple[int, int], ...]
    perfect: bool
    barrier: tuple[int, ...] | None = None
    """Tutte set A (only when imperfect)."""
    odd_components: int | None = None
    """Number of odd components of G - A (only when imperfect)."""

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def deficiency(self) -> int | None:
        if self.barrier is None:
            return None
        return self.odd_components - len(self.barrier)


class _Neighbours:
    """Lazy per-vertex neighbour lists, so huge dense graphs never materialise all of them."""

    def __init__(self, g: Graph):
        self.g = g
        self.cache: dict[int, list[int]] = {}

    def __getitem__(self, v: int) -> list[int]:
        row = self.cache.get(v)
        if row is None:
            row = self.g.neighbors(v).tolist()
            self.cache[v] = row
        return row


def _greedy(g: Graph) -> np.ndarray:
    match = np.full(g.n, -1, dtype=np.int64)
    free = np.ones(g.n, dtype=bool)
    for v in np.argsort(g.degrees, kind="stable").tolist():
        if not free[v]:
            continue
        nb = g.neighbors(v)
        cand = nb[free[nb]]
        if len(cand):
            # prefer the free neighbour of smallest degree
            w = int(cand[np.argmin(g.degrees[cand])])
            match[v], match[w] = w, v
            free[v] = free[w] = False
    return match


class _Blossom:
    """Edmonds' search with blossom contraction over a shared matching array."""

    def __init__(self, n: int, adj, match: list[int]):
        self.n = n
        self.adj = adj
        self.match = match

    def _lca(self, a: int, b: int, base, parent) -> int | None:
        match = self.match
        seen = set()
        while True:
            a = base[a]
            seen.add(a)
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if b in seen:
                return b
            if match[b] == -1:
                return None
            b = parent[match[b]]

    def _mark(self, v: int, b: int, child: int, base, parent, inblossom) -> None:
        match = self.match
        while base[v] != b:
            inblossom[base[v]] = True
            inblossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    def search(self, roots: list[int]):
        """Alternating forest search from ``roots``.

        Returns ``(end, parent, even)`` where ``end`` is an exposed vertex
        closing an augmenting path from a single root (or None).
        """
        n, adj, match = self.n, self.adj, self.match
        base = list(range(n))
        parent = [-1] * n
        even = [False] * n
        q = deque(roots)
        for r in roots:
            even[r] = True
        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if even[to]:
                    cur = self._lca(v, to, base, parent)
                    if cur is None:
                        raise AssertionError("even vertices of different trees are adjacent")
                    inblossom = {}
                    self._mark(v, cur, to, base, parent, inblossom)
                    self._mark(to, cur, v, base, parent, inblossom)
                    for i in range(n):
                        if inblossom.get(base[i]):
                            base[i] = cur
                            if not even[i]:
                                even[i] = True
                                q.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to, parent, even
                    even[match[to]] = True
                    q.append(match[to])
        return None, parent, even

    def augment_from(self, root: int) -> bool:
        end, parent, _ = self.search([root])
        if end is None:
            return False
        match = self.match
        v = end
        while v != -1:
            pv = parent[v]
            ppv = match[pv]
            match[v] = pv
            match[pv] = v
            v = ppv
        return True


def maximum_matching(g: Graph) -> list[int]:
    """Mate array of a maximum matching (``-1`` for exposed vertices)."""
    match = _greedy(g).tolist()
    adj = _Neighbours(g)
    bl = _Blossom(g.n, adj, match)
    for v in range(g.n):
        if match[v] == -1 and len(adj[v]):
            bl.augment_from(v)
    return match


def _odd_components_without(g: Graph, removed: set[int]) -> int:
    keep = np.ones(g.n, dtype=bool)
    keep[list(removed)] = False
    sub = g.induced(np.flatnonzero(keep))
    comps = sub.components()
    return sum(1 for c in comps if keep[c[0]] and len(c) % 2 == 1)


def perfect_matching(g: Graph) -> MatchingResult:
    """Maximum matching; when imperfect also a Tutte set A with odd(G-A) - |A| = n - 2ν."""
    match = maximum_matching(g)
    pairs = tuple((v, match[v]) for v in range(g.n) if match[v] > v)
    if 2 * len(pairs) == g.n:
        return MatchingResult(pairs, True)
    exposed = [v for v in range(g.n) if match[v] == -1]
    bl = _Blossom(g.n, _Neighbours(g), match)
    end, _, even = bl.search(exposed)
    if end is not None:
        raise AssertionError("matching was not maximum")
    D = {v for v in range(g.n) if even[v]}
    A = set()
    for v in D:
        A.update(w for w in g.neighbors(v).tolist() if w not in D)
    odd = _odd_components_without(g, A)
    if odd - len(A) != g.n - 2 * len(pairs):
        raise AssertionError("Tutte–Berge witness does not certify the deficiency")
    return MatchingResult(pairs, False, tuple(sorted(A)), odd)


def has_perfect_matching(g: Graph) -> bool:
    if g.n % 2:
        return False
    match = maximum_matching(g)
    return all(m != -1 for m in match)
