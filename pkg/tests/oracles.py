"""Independent brute-force reference implementations used by the tests."""

from __future__ import annotations

import itertools


def graphs_with_degrees(degrees):
    """All labeled simple graphs (as frozensets of (u, v), u < v) realizing ``degrees``."""
    n = len(degrees)
    out = []

    def rec(u, rem, edges):
        if u == n:
            out.append(frozenset(edges))
            return
        if rem[u] == 0:
            rec(u + 1, rem, edges)
            return
        later = [w for w in range(u + 1, n) if rem[w] > 0]
        if len(later) < rem[u]:
            return
        for chosen in itertools.combinations(later, rem[u]):
            r2 = list(rem)
            r2[u] = 0
            for w in chosen:
                r2[w] -= 1
            rec(u + 1, r2, edges + [(u, w) for w in chosen])

    rec(0, list(degrees), [])
    return out


def longest_path_len(n, edges):
    """Edge count of a longest path, by DP over (vertex set, endpoint)."""
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    if n == 0:
        return 0
    reach = {(frozenset([v]), v) for v in range(n)}
    best = 0
    frontier = reach
    while frontier:
        nxt = set()
        for s, end in frontier:
            for w in adj[end]:
                if w not in s:
                    nxt.add((s | {w}, w))
        if nxt:
            best = len(next(iter(nxt))[0]) - 1
        frontier = nxt
    return best


def is_hamiltonian(n, edges):
    """Hamilton cycle existence by permutation search (n <= 10)."""
    if n < 3:
        return False
    es = {frozenset(e) for e in edges}
    for perm in itertools.permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue
        cyc = (0,) + perm
        if all(frozenset((cyc[i], cyc[(i + 1) % n])) in es for i in range(n)):
            return True
    return False


def max_matching_size(n, edges):
    """Maximum matching by exhaustive recursion (n <= 10)."""
    edges = list(edges)

    def rec(i, used):
        if i == len(edges):
            return 0
        best = rec(i + 1, used)
        u, v = edges[i]
        if u not in used and v not in used:
            best = max(best, 1 + rec(i + 1, used | {u, v}))
        return best

    return rec(0, frozenset())


def edge_connectivity_brute(n, edges):
    best = None
    for mask in range(1, 2 ** (n - 1)):
        side = {v for v in range(n) if mask >> v & 1}
        cut = sum(1 for u, v in edges if (u in side) != (v in side))
        best = cut if best is None else min(best, cut)
    return best if best is not None else 0


def vertex_connectivity_brute(n, edges):
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    if all(len(adj[v]) == n - 1 for v in range(n)):
        return n - 1
    for k in range(0, n - 1):
        for S in itertools.combinations(range(n), k):
            rest = [v for v in range(n) if v not in S]
            seen = {rest[0]}
            stack = [rest[0]]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in S and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) < len(rest):
                return k
    return n - 1


def booster_pairs(n, edges):
    """Boosters by definition, using per-start path DP and a submask-max split through the new edge."""
    import numpy as np

    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    full = (1 << n) - 1
    ends = [0] * (1 << n)
    ham_ends = [0] * n
    for a in range(n):
        reach = {1 << a: 1 << a}
        for S in sorted(reach_masks(n, a), key=lambda m: bin(m).count("1")):
            e = reach.get(S, 0)
            if not e:
                continue
            ends[S] |= e
            for w in range(n):
                if S >> w & 1:
                    continue
                if any(e >> x & 1 and adj[x] >> w & 1 for x in range(n)):
                    T = S | 1 << w
                    reach[T] = reach.get(T, 0) | 1 << w
        ham_ends[a] = reach.get(full, 0)
    if n == 0:
        return set()
    ell = max(bin(S).count("1") for S in range(1, 1 << n) if ends[S]) - 1
    ham = n >= 3 and any(ham_ends[a] & adj[a] for a in range(n))
    sizes = np.array([bin(S).count("1") for S in range(1 << n)])
    best = []
    for v in range(n):
        b = np.where(np.array([ends[S] >> v & 1 for S in range(1 << n)], dtype=bool), sizes, -10**6)
        for bit in range(n):
            idx = np.arange(1 << n)
            has = (idx >> bit) & 1 == 1
            b[has] = np.maximum(b[has], b[idx[has] ^ (1 << bit)])
        best.append(b)
    out = set()
    for u in range(n):
        for v in range(u + 1, n):
            if adj[u] >> v & 1:
                continue
            if ham or (n >= 3 and ham_ends[u] >> v & 1):
                out.add((u, v))
                continue
            new = 0
            for S in range(1 << n):
                if ends[S] >> u & 1 and not S >> v & 1:
                    new = max(new, bin(S).count("1") + int(best[v][full ^ S]))
            if new - 1 > ell:
                out.add((u, v))
    return out


def reach_masks(n, a):
    return [S for S in range(1 << n) if S >> a & 1]


def quasirandom_brute(n, edges, d, eps, mu, beta):
    """(P1 holds, P2 holds) by enumerating every U and every W (n <= 8)."""
    es = [tuple(e) for e in edges]
    p1 = p2 = True
    for k in range(1, n + 1):
        for U in itertools.combinations(range(n), k):
            Us = set(U)
            if k < mu * n / 14:
                if sum(1 for a, b in es if a in Us and b in Us) > mu * d * k / 14 + 1e-9:
                    p1 = False
            if beta * n <= k < 2 * beta * n:
                rest = [v for v in range(n) if v not in Us]
                for j in range(len(rest) + 1):
                    if j < n / 2 * (1 - eps / 2 - 4 * beta) - 1e-12:
                        continue
                    for W in itertools.combinations(rest, j):
                        Ws = set(W)
                        e = sum(1 for a, b in es if (a in Us and b in Ws) or (b in Us and a in Ws))
                        if e < d * (1 - eps / 4) / n * k * j - (1 - eps) * d / 2 * k - 1e-9:
                            p2 = False
    return p1, p2
