"""Rotation machinery, boosters, booster absorption and expansion checks."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from rlab.graph import Graph, GraphError
from rlab.hamilton import (
    DP_LIMIT,
    decide_hamiltonian,
    endpoint_table,
    is_path,
    longest_path_exact,
    longest_path_heuristic_path,
)
from rlab.rng import as_generator

EXACT_BOOSTER_LIMIT = 10
EXACT_EXPANSION_LIMIT = 20


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------------------
# Paths and rotations


@dataclass(frozen=True)
class PosaState:
    path: tuple[int, ...]
    log: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = ()
    """One ``(broken edge, used edge)`` entry per rotation."""

    @property
    def length(self) -> int:
        return len(self.path) - 1

    @property
    def start(self) -> int:
        return self.path[0]

    @property
    def end(self) -> int:
        return self.path[-1]


def elementary_rotation(g: Graph, s: PosaState, pivot: int) -> PosaState:
    """Rotate along the edge {end, pivot}: (v0..vi, vt, vt-1, .., vi+1)."""
    path = s.path
    t = len(path) - 1
    vt = path[-1]
    if not g.has_edge(vt, pivot):
        raise GraphError(f"{{{vt}, {pivot}}} is not an edge at the current endpoint")
    try:
        i = path.index(pivot)
    except ValueError as exc:
        raise GraphError("pivot is not on the path") from exc
    if i > t - 2:
        raise GraphError("pivot must be at position <= t-2")
    new = path[: i + 1] + path[i + 1:][::-1]
    return PosaState(new, s.log + ((_key(path[i], path[i + 1]), _key(vt, pivot)),))


def replay(g: Graph, path, log) -> tuple[int, ...]:
    """Apply a rotation log to ``path``; every step is re-validated."""
    s = PosaState(tuple(path))
    for _, used in log:
        end = s.end
        pivot = used[0] if used[1] == end else used[1]
        s = elementary_rotation(g, s, pivot)
    return s.path


@dataclass
class Expansion:
    endpoints: dict[int, tuple[int, ...]]
    """Reachable endpoint -> one witness path (start fixed)."""
    levels: list[list[int]]
    """levels[i] = endpoints first reached after i rotations."""
    extendable: dict[int, int] = field(default_factory=dict)
    """Endpoint -> a neighbour off the path (only when the witness path can be extended)."""

    @property
    def reachable(self) -> set[int]:
        return set(self.endpoints)


def endpoint_expansion(g: Graph, s: PosaState, *, require_maximal: bool = True,
                       max_endpoints: int | None = None) -> Expansion:
    """All endpoints reachable by rotations with the start fixed (breadth-first).

    One witness path is kept per endpoint and rotations are applied to that
    witness only, so the search is polynomial.
    """
    path = list(s.path)
    if not is_path(g, path):
        raise GraphError("state is not a path of the host graph")
    on = np.zeros(g.n, dtype=bool)
    on[path] = True
    adj = g.adj
    if require_maximal and any(not on[w] for w in adj[path[-1]]):
        raise GraphError("path is extendable at its endpoint; extend it first")
    t = len(path) - 1
    found: dict[int, tuple[int, ...]] = {path[-1]: tuple(path)}
    levels = [[path[-1]]]
    ext: dict[int, int] = {}
    q = deque([(tuple(path), 0)])
    while q:
        p, depth = q.popleft()
        pos = {v: i for i, v in enumerate(p)}
        end = p[-1]
        for w in adj[end]:
            if not on[w]:
                ext.setdefault(end, w)
                continue
            i = pos[w]
            if i > t - 2:
                continue
            new_end = p[i + 1]
            if new_end in found:
                continue
            newp = p[: i + 1] + p[i + 1:][::-1]
            found[new_end] = newp
            if len(levels) <= depth + 1:
                levels.append([])
            levels[depth + 1].append(new_end)
            q.append((newp, depth + 1))
            if max_endpoints is not None and len(found) >= max_endpoints:
                q.clear()
                break
    return Expansion(found, levels, ext)


def extend_greedily(g: Graph, path: list[int]) -> list[int]:
    """Extend at both ends while an off-path neighbour exists."""
    path = list(path)
    on = set(path)
    adj = g.adj
    for _ in range(2):
        grew = True
        while grew:
            grew = False
            for w in adj[path[-1]]:
                if w not in on:
                    path.append(w)
                    on.add(w)
                    grew = True
                    break
        path.reverse()
    return path


def longest_path_heuristic(g: Graph, iters: int = 100, seed=0) -> PosaState:
    return PosaState(tuple(longest_path_heuristic_path(g, iters, seed)))


# ---------------------------------------------------------------------------
# Boosters


@dataclass
class BoosterSet:
    pairs: set[tuple[int, int]]
    mode: str
    path_exact: bool = True
    base_path: tuple[int, ...] = ()

    def partners(self, v: int) -> set[int]:
        return {b if a == v else a for a, b in self.pairs if v in (a, b)}

    def per_vertex(self, n: int) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in range(n)]
        for a, b in self.pairs:
            out[a].add(b)
            out[b].add(a)
        return out


def _ham_bits(n: int, adj_bits: list[int]) -> bool:
    if n < 3:
        return False
    t = endpoint_table(n, adj_bits, start=0)
    return bool(int(t[(1 << n) - 1]) & adj_bits[0])


def _lp_bits(n: int, adj_bits: list[int]) -> int:
    t = endpoint_table(n, adj_bits)
    return int(np.bitwise_count(np.flatnonzero(t).astype(np.int64)).max()) - 1


def exact_boosters(g: Graph, *, limit: int = EXACT_BOOSTER_LIMIT) -> BoosterSet:
    """Every non-edge e with G+e Hamiltonian or ℓ(G+e) > ℓ(G), each recomputed by subset DP."""
    n = g.n
    if n > limit:
        raise GraphError(f"exact boosters limited to n <= {limit}")
    bits = list(g.adj_bits)
    ham = _ham_bits(n, bits)
    ell = _lp_bits(n, bits) if n else 0
    out = set()
    for u in range(n):
        for v in range(u + 1, n):
            if bits[u] >> v & 1:
                continue
            if ham:
                out.add((u, v))
                continue
            b2 = list(bits)
            b2[u] |= 1 << v
            b2[v] |= 1 << u
            if _ham_bits(n, b2) or _lp_bits(n, b2) > ell:
                out.add((u, v))
    return BoosterSet(out, "exact")


def _pairs_from_expansion(g: Graph, fixed: int, ex: Expansion, on: np.ndarray, closers_ok: bool,
                          outside: list[int]) -> set[tuple[int, int]]:
    adjs = g.adj_sets
    out = set()
    for u in ex.endpoints:
        if closers_ok and u != fixed and u not in adjs[fixed]:
            out.add(_key(fixed, u))
        for x in outside:
            out.add(_key(u, x))
    for x in outside:
        out.add(_key(fixed, x))
    return out


def witnessed_boosters(g: Graph, path=None, *, depth: int = 1, seed=0, iters: int = 50,
                       max_sources: int | None = None) -> BoosterSet:
    """Boosters read off rotations of a longest path.

    Let P be a longest path with ends a, b.  Every endpoint u reachable from
    P by rotations fixing a yields the pair {a, u}: it closes a cycle on V(P),
    which is Hamiltonian when P spans G and otherwise lengthens the longest
    path whenever the component of P sticks out of V(P).  Pairs joining a
    reachable endpoint to a vertex off P extend the path directly.  ``depth=1``
    rotates from both ends of P; ``depth=2`` from every reachable endpoint as
    well.  Soundness needs P to be longest: exact for n <= 22, otherwise the
    path comes from the heuristic and ``path_exact`` is False (unless P spans G).
    """
    n = g.n
    if n < 2:
        return BoosterSet(set(), "witnessed")
    if path is None:
        path = longest_path_exact(g) if n <= DP_LIMIT else longest_path_heuristic_path(g, iters, seed)
        exact = n <= DP_LIMIT
    else:
        exact = False
    path = extend_greedily(g, list(path))
    exact = exact or len(path) == n
    on = np.zeros(n, dtype=bool)
    on[path] = True
    outside = np.flatnonzero(~on).tolist()
    comp_labels = _component_labels(g)
    comp_of_path = comp_labels[path[0]]
    closers_ok = len(path) == n or bool(np.any((comp_labels == comp_of_path) & ~on))
    pairs: set[tuple[int, int]] = set()
    sources = [tuple(path), tuple(reversed(path))]
    seen_sources = set()
    while sources:
        p = sources.pop(0)
        if p in seen_sources:
            continue
        seen_sources.add(p)
        ex = endpoint_expansion(g, PosaState(p), require_maximal=False)
        pairs |= _pairs_from_expansion(g, p[0], ex, on, closers_ok, outside)
        if depth >= 2 and len(seen_sources) <= 2:
            extra = [tuple(reversed(w)) for u, w in ex.endpoints.items() if u != p[-1]]
            if max_sources is not None:
                extra = extra[:max_sources]
            sources.extend(extra)
    pairs = {e for e in pairs if not g.has_edge(*e)}
    return BoosterSet(pairs, "witnessed", exact, tuple(path))


def _component_labels(g: Graph) -> np.ndarray:
    import scipy.sparse.csgraph as csg

    return csg.connected_components(g.sparse, directed=False)[1]


def boosters(g: Graph, mode: str = "exact", **kw) -> BoosterSet:
    if mode == "exact":
        return exact_boosters(g, **kw)
    if mode == "witnessed":
        return witnessed_boosters(g, **kw)
    raise GraphError(f"unknown booster mode {mode!r}")


# ---------------------------------------------------------------------------
# Absorption


@dataclass
class AbsorbResult:
    success: bool
    cycle: tuple[int, ...] | None
    added: list[tuple[int, int]]
    iterations: int
    trace: list[str]
    stuck: Graph | None = None


def absorb_boosters(g0: Graph, pool: Graph, forbidden: Graph | None = None, cap: int | None = None,
                    seed=0) -> AbsorbResult:
    """Add boosters from ``pool - forbidden`` one at a time until Hamiltonian (at most ``cap`` additions)."""
    n = g0.n
    forbidden = forbidden if forbidden is not None else Graph.empty(n)
    if pool.n != n or forbidden.n != n:
        raise GraphError("pool and forbidden must share the vertex set")
    if not forbidden.is_subgraph_of(pool):
        raise GraphError("forbidden must be a subgraph of pool")
    cap = n if cap is None else cap
    rng = as_generator(seed)
    cur = g0
    added: list[tuple[int, int]] = []
    trace: list[str] = []
    for it in range(cap + 1):
        dec = decide_hamiltonian(cur, seed=rng)
        if dec.hamiltonian:
            return AbsorbResult(True, dec.cycle, added, it, trace)
        if it == cap:
            trace.append("iteration cap reached")
            break
        avail = pool.difference(forbidden).difference(cur)
        bs = witnessed_boosters(cur, seed=rng)
        choice = sorted(e for e in bs.pairs if avail.has_edge(*e))
        if not choice:
            trace.append(f"iteration {it}: no booster available in the pool")
            return AbsorbResult(False, None, added, it, trace, cur)
        e = choice[0]
        trace.append(f"iteration {it}: add {e}")
        added.append(e)
        cur = cur.add_edges([e])
    return AbsorbResult(False, None, added, cap, trace, cur)


# ---------------------------------------------------------------------------
# Expansion checks


@dataclass
class ExpansionVerdict:
    status: str
    witness: tuple[int, ...] | None
    params: dict
    method: str
    detail: str = ""


def neighbourhood_table(g: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """For every mask: size, external-neighbourhood size (n <= 20)."""
    n = g.n
    if n > EXACT_EXPANSION_LIMIT:
        raise GraphError(f"exact expansion check limited to n <= {EXACT_EXPANSION_LIMIT}")
    nb = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        lo = 1 << b
        nb[lo:2 * lo] = nb[:lo] | g.adj_bits[b]
    masks = np.arange(1 << n, dtype=np.int64)
    return masks, np.bitwise_count(masks), np.bitwise_count(nb & ~masks)


def _mask_to_set(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _expander_requirements(n: int, eps: float):
    """Yields (lo, hi, need(size)) windows: Q1 for sizes < εn, Q2 for εn <= size <= 2εn."""
    q2 = (1 + 12 * eps) * n / 2
    return [
        (1, math.ceil(eps * n) - 1, lambda s: 10 * s, "Q1"),
        (max(1, math.ceil(eps * n)), math.floor(2 * eps * n), lambda s: q2 + 0 * s, "Q2"),
    ]


def _tanner_lower(n: int, d: float, lam: float, size: int) -> float:
    """Lower bound on the external neighbourhood of any ``size``-set in an (n, d, λ)-graph."""
    whole = d * d * size / (lam * lam + (d * d - lam * lam) * size / n)
    return whole - size


def _greedy_refute(g: Graph, windows, rng: np.random.Generator, tries: int) -> tuple[int, ...] | None:
    """Grow sets that keep their neighbourhood small; return one that violates a window."""
    n = g.n
    adj = g.adj
    max_size = max((hi for lo, hi, _, _ in windows if hi >= lo), default=0)
    if max_size <= 0:
        return None
    starts = list(range(n)) if n <= tries else rng.choice(n, size=tries, replace=False).tolist()
    for s in starts:
        inU = np.zeros(n, dtype=bool)
        cover = np.zeros(n, dtype=np.int64)
        U = []
        v = s
        while True:
            U.append(v)
            inU[v] = True
            for w in adj[v]:
                cover[w] += 1
            size = len(U)
            ext = int(np.count_nonzero((cover > 0) & ~inU))
            for lo, hi, need, _ in windows:
                if lo <= size <= hi and ext < need(size):
                    return tuple(sorted(U))
            if size >= max_size:
                break
            # next vertex: the boundary (or any) vertex adding the fewest new neighbours
            cand = np.flatnonzero((cover > 0) & ~inU)
            if len(cand) == 0:
                cand = np.flatnonzero(~inU)
            if len(cand) > 64:
                cand = rng.choice(cand, size=64, replace=False)
            best, best_gain = None, None
            for c in cand.tolist():
                gain = sum(1 for w in adj[c] if cover[w] == 0 and not inU[w]) - (1 if cover[c] > 0 else 0)
                if best_gain is None or gain < best_gain:
                    best, best_gain = c, gain
            v = best
    return None


def _check(g: Graph, windows, mode: str, params: dict, lam: float | None, seed, tries: int) -> ExpansionVerdict:
    n = g.n
    live = [(lo, hi, need, tag) for lo, hi, need, tag in windows if hi >= lo and lo <= n]
    if mode == "exact":
        masks, size, ext = neighbourhood_table(g)
        for lo, hi, need, tag in live:
            sel = (size >= lo) & (size <= hi)
            req = np.array([need(s) for s in range(n + 1)], dtype=np.float64)
            bad = np.flatnonzero(sel & (ext < req[size]))
            if len(bad):
                m = int(bad[np.argmin(size[bad])])
                return ExpansionVerdict("refuted", _mask_to_set(m), params, "exact-enumeration", tag)
        return ExpansionVerdict("certified", None, params, "exact-enumeration",
                                "vacuous: no set sizes constrained" if not live else "")
    if mode != "heuristic":
        raise GraphError(f"unknown mode {mode!r}")
    rng = as_generator(seed)
    wit = _greedy_refute(g, live, rng, tries)
    if wit is not None:
        ext = len(g.neighborhood(list(wit)))
        tag = next(t for lo, hi, need, t in live if lo <= len(wit) <= hi and ext < need(len(wit)))
        return ExpansionVerdict("refuted", wit, params, "greedy-search", tag)
    if lam is not None and g.is_regular():
        d = g.max_degree
        for lo, hi, need, tag in live:
            # the bound minus the requirement is concave in the size, so the window ends suffice
            for s in {lo, hi}:
                if _tanner_lower(n, d, lam, s) < need(s):
                    return ExpansionVerdict("unknown", None, params, "spectral",
                                            f"spectral bound too weak at size {s} ({tag})")
        return ExpansionVerdict("certified", None, params, "spectral", "spectral neighbourhood bound")
    return ExpansionVerdict("unknown", None, params, "greedy-search", "no violation found")


def expander_check(g: Graph, epsilon: float, mode: str = "exact", *, lam: float | None = None, seed=0,
                   tries: int = 200) -> ExpansionVerdict:
    """(n, ε)-expander test: sets below εn expand 10-fold, sets of size εn..2εn reach (1+12ε)n/2."""
    if epsilon <= 0:
        raise GraphError("epsilon must be positive")
    return _check(g, _expander_requirements(g.n, epsilon), mode, {"epsilon": epsilon}, lam, seed, tries)


def magnifier_check(g: Graph, k: int, l: float, mode: str = "exact", *, lam: float | None = None, seed=0,
                    tries: int = 200) -> ExpansionVerdict:
    """(k, l)-magnifier test: every set of size at most k has at least l times as many neighbours."""
    if k < 0 or l <= 0:
        raise GraphError("need k >= 0 and l > 0")
    windows = [(1, int(k), lambda s: l * s, "magnifier")]
    return _check(g, windows, mode, {"k": k, "l": l}, lam, seed, tries)
