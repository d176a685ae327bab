"""Random graph generators and closed-form probability bounds.

Generators take an integer seed or a numpy ``Generator``.  Exact uniform
sampling uses the pairing (configuration) model with full rejection; for
degrees where rejection is hopeless a switch-repaired pairing is offered and
must be requested explicitly (``method="switch"``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from rlab.graph import Graph, GraphError
from rlab.rng import as_generator

REJECTION_CAP = 10**6
MAX_SEQ_DEGREE = 64


class GenerationError(RuntimeError):
    """A sampler gave up (rejection or resampling cap exceeded)."""


# ---------------------------------------------------------------------------
# Degree sequences


def is_graphic(degrees) -> bool:
    """Erdős–Gallai test."""
    d = sorted((int(x) for x in degrees), reverse=True)
    if any(x < 0 for x in d) or sum(d) % 2:
        return False
    n = len(d)
    if n and d[0] >= n:
        return False
    prefix = 0
    for k in range(1, n + 1):
        prefix += d[k - 1]
        tail = sum(min(x, k) for x in d[k:])
        if prefix > k * (k - 1) + tail:
            return False
    return True


@dataclass(frozen=True)
class DegreeSequence:
    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(x) for x in self.degrees))
        if not is_graphic(self.degrees):
            raise GraphError(f"degree sequence {self.degrees} is not graphic")

    @classmethod
    def regular(cls, n: int, d: int) -> "DegreeSequence":
        return cls((d,) * n)

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def total(self) -> int:
        return sum(self.degrees)

    @property
    def mean(self) -> float:
        """Average degree d̄."""
        return self.total / self.n

    @property
    def max(self) -> int:
        return max(self.degrees) if self.degrees else 0


# ---------------------------------------------------------------------------
# Pairing model


def _pair_stubs(stubs: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    perm = rng.permutation(stubs)
    a, b = perm[0::2], perm[1::2]
    return np.minimum(a, b), np.maximum(a, b)


def _simple_pairings(n: int, stubs: np.ndarray, rng: np.random.Generator, b: int) -> np.ndarray:
    """``b`` i.i.d. pairings; returns the sorted edge keys of the simple ones (one row each)."""
    perm = np.argsort(rng.random((b, len(stubs))), axis=1)
    paired = stubs[perm]
    a, c = paired[:, 0::2], paired[:, 1::2]
    keys = np.sort(np.minimum(a, c) * n + np.maximum(a, c), axis=1)
    ok = ~np.any(a == c, axis=1) & ~np.any(keys[:, 1:] == keys[:, :-1], axis=1)
    return keys[ok]


def _pairing_with_rejection(n: int, degrees: np.ndarray, rng: np.random.Generator, cap: int,
                            avoid: np.ndarray | None = None) -> Graph:
    """Draw pairings in vectorised batches; the first acceptable one is returned.

    The first success among i.i.d. trials is uniform over acceptable outcomes,
    so batching does not bias the sample.  ``avoid`` holds edge keys that the
    result must not contain.
    """
    stubs = np.repeat(np.arange(n, dtype=np.int64), degrees)
    if len(stubs) == 0:
        return Graph.empty(n)
    tried = 0
    batch = 4
    while tried < cap:
        b = min(batch, cap - tried)
        cands = _simple_pairings(n, stubs, rng, b)
        if avoid is not None and len(cands):
            clash = np.isin(cands, avoid).any(axis=1)
            cands = cands[~clash]
        if len(cands):
            return Graph.from_keys(n, cands[0])
        tried += b
        batch = min(batch * 2, max(4, 2_000_000 // len(stubs)))
    raise GenerationError(f"pairing rejection cap {cap} exceeded; degrees too large for rejection sampling")


def _switch_repair(n: int, degrees: np.ndarray, rng: np.random.Generator, forbidden: set[int] | None,
                   mix: int) -> Graph:
    """Pairing followed by random switches that remove loops, repeats and forbidden pairs."""
    stubs = np.repeat(np.arange(n, dtype=np.int64), degrees)
    u, v = _pair_stubs(stubs, rng)
    U = u.tolist()
    V = v.tolist()
    forbidden = forbidden or set()
    present: set[int] = set()
    bad: list[int] = []
    is_bad = bytearray(len(U))
    for i, (a, b) in enumerate(zip(U, V)):
        k = a * n + b
        if a == b or k in present or k in forbidden:
            bad.append(i)
            is_bad[i] = 1
        else:
            present.add(k)
    m = len(U)
    guard = 0
    limit = 1000 * (len(bad) + 1) + 100 * m
    while bad:
        guard += 1
        if guard > limit:
            raise GenerationError("switch repair failed to converge")
        i = bad[-1]
        j = int(rng.integers(m))
        if is_bad[j]:
            continue
        a, b = U[i], V[i]
        c, e = (U[j], V[j]) if rng.random() < 0.5 else (V[j], U[j])
        if a == c or b == e:
            continue
        k1 = a * n + c if a < c else c * n + a
        k2 = b * n + e if b < e else e * n + b
        if k1 == k2 or k1 in present or k2 in present or k1 in forbidden or k2 in forbidden:
            continue
        present.discard(U[j] * n + V[j])
        present.add(k1)
        present.add(k2)
        U[i], V[i] = min(a, c), max(a, c)
        U[j], V[j] = min(b, e), max(b, e)
        is_bad[i] = 0
        bad.pop()
    # degree-preserving double-edge swaps for extra mixing
    for _ in range(mix):
        i, j = int(rng.integers(m)), int(rng.integers(m))
        if i == j:
            continue
        a, b = U[i], V[i]
        c, e = (U[j], V[j]) if rng.random() < 0.5 else (V[j], U[j])
        if a == c or b == e or a == e or b == c:
            continue
        k1 = a * n + c if a < c else c * n + a
        k2 = b * n + e if b < e else e * n + b
        if k1 in present or k2 in present or k1 in forbidden or k2 in forbidden:
            continue
        present.discard(a * n + b)
        present.discard(U[j] * n + V[j])
        present.add(k1)
        present.add(k2)
        U[i], V[i] = min(a, c), max(a, c)
        U[j], V[j] = min(b, e), max(b, e)
    return Graph.from_keys(n, np.sort(np.fromiter(present, dtype=np.int64, count=len(present))))


def _check_regular_params(n: int, d: int) -> None:
    if n < 0 or d < 0 or d >= max(n, 1) and not (n == 0 and d == 0):
        raise GraphError(f"no {d}-regular graph on {n} vertices")
    if (n * d) % 2:
        raise GraphError(f"n*d must be even (n={n}, d={d})")


def gen_regular(n: int, d: int, seed, *, method: str = "pairing", mix: int | None = None,
                cap: int = REJECTION_CAP) -> Graph:
    """Random simple ``d``-regular graph on ``n`` vertices.

    ``method="pairing"`` is exactly uniform (pairing model, rejected until
    simple).  ``method="switch"`` repairs one pairing by random switches and
    then runs ``mix`` double-edge swaps (default ``m // 2``); it is fast at any
    degree but only approximately uniform.  For ``d > (n-1)/2`` the switch
    method samples the complement.  ``method="auto"`` picks pairing for
    ``d <= 6``.
    """
    _check_regular_params(n, d)
    rng = as_generator(seed)
    if method == "auto":
        method = "pairing" if d <= 6 else "switch"
    if method == "pairing":
        return _pairing_with_rejection(n, np.full(n, d, dtype=np.int64), rng, cap)
    if method != "switch":
        raise GraphError(f"unknown generation method {method!r}")
    if 2 * d > n - 1:
        comp = _switch_repair(n, np.full(n, n - 1 - d, dtype=np.int64), rng, None,
                              (n * (n - 1 - d)) // 4 if mix is None else mix)
        return complement(comp)
    return _switch_repair(n, np.full(n, d, dtype=np.int64), rng, None, (n * d) // 4 if mix is None else mix)


def gen_regular_avoiding(n: int, d: int, avoid: Graph, seed, *, mix: int | None = None) -> Graph:
    """Approximately uniform ``d``-regular graph edge-disjoint from ``avoid`` (switch method)."""
    _check_regular_params(n, d)
    if avoid.n != n:
        raise GraphError("avoid graph has a different vertex count")
    rng = as_generator(seed)
    forb = set(avoid.edge_keys.tolist())
    return _switch_repair(n, np.full(n, d, dtype=np.int64), rng, forb, (n * d) // 4 if mix is None else mix)


def complement(g: Graph) -> Graph:
    n = g.n
    iu, iv = np.triu_indices(n, 1)
    keys = iu.astype(np.int64) * n + iv
    return Graph.from_keys(n, keys[~g.contains_keys(keys)])


def gen_degree_sequence(dseq: DegreeSequence, seed, *, cap: int = REJECTION_CAP) -> Graph:
    """Uniform graph with the given degrees (pairing with rejection)."""
    if dseq.max > MAX_SEQ_DEGREE:
        raise GraphError(f"maximum degree {dseq.max} exceeds {MAX_SEQ_DEGREE}")
    return _pairing_with_rejection(dseq.n, np.asarray(dseq.degrees, dtype=np.int64), as_generator(seed), cap)


def gen_union(n: int, d1: int, d2: int, seed, *, method: str = "auto",
              cap: int = REJECTION_CAP) -> tuple[Graph, Graph, Graph]:
    """Edge-disjoint ``d1``- and ``d2``-regular graphs and their union.

    ``method="resample"`` draws the second graph by exact pairing until it is
    disjoint from the first (exact conditioning).  ``method="switch"`` draws it
    with the switch sampler restricted to the complement of the first.
    ``auto`` resamples when ``d1*d2 <= 16`` and both degrees are at most 6.
    """
    if d1 < 3 or d2 < 3:
        raise GraphError("union mode needs d1, d2 >= 3")
    _check_regular_params(n, d1)
    _check_regular_params(n, d2)
    if d1 + d2 > n - 1:
        raise GraphError(f"K_{n} cannot host edge-disjoint {d1}- and {d2}-regular graphs")
    rng = as_generator(seed)
    if method == "auto":
        method = "resample" if d1 * d2 <= 16 and max(d1, d2) <= 6 else "switch"
    if method == "resample":
        g1 = gen_regular(n, d1, rng, cap=cap)
        try:
            g2 = _pairing_with_rejection(n, np.full(n, d2, dtype=np.int64), rng, cap, avoid=g1.edge_keys)
        except GenerationError as exc:
            raise GenerationError("disjointness resample cap exceeded") from exc
        return g1, g2, g1.union(g2)
    if method != "switch":
        raise GraphError(f"unknown union method {method!r}")
    g1 = gen_regular(n, d1, rng, method="auto")
    g2 = gen_regular_avoiding(n, d2, g1, rng)
    return g1, g2, g1.union(g2)


def _random_hamilton_cycle(n: int, rng: np.random.Generator) -> np.ndarray:
    perm = rng.permutation(n).astype(np.int64)
    a, b = perm, np.roll(perm, -1)
    return np.sort(np.minimum(a, b) * n + np.maximum(a, b))


def gen_two_hamilton_cycles(n: int, seed, *, cap: int = REJECTION_CAP) -> tuple[list[int], list[int], Graph]:
    """Two uniform, edge-disjoint Hamilton cycles (returned as vertex orders) and their union."""
    if n < 5:
        raise GraphError("two edge-disjoint Hamilton cycles need n >= 5")
    rng = as_generator(seed)
    first = rng.permutation(n).astype(np.int64)
    k1 = np.sort(np.minimum(first, np.roll(first, -1)) * n + np.maximum(first, np.roll(first, -1)))
    for _ in range(cap):
        second = rng.permutation(n).astype(np.int64)
        k2 = np.sort(np.minimum(second, np.roll(second, -1)) * n + np.maximum(second, np.roll(second, -1)))
        if not np.any(np.isin(k2, k1)):
            return first.tolist(), second.tolist(), Graph.from_keys(n, np.union1d(k1, k2))
    raise GenerationError("disjoint Hamilton cycle resample cap exceeded")


def cycle_graph(n: int, order) -> Graph:
    order = list(order)
    return Graph.from_edges(n, [(order[i], order[(i + 1) % len(order)]) for i in range(len(order))])


def gen_binomial(n: int, p: float, seed) -> Graph:
    """Each of the C(n,2) pairs present independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise GraphError("p must lie in [0, 1]")
    if n < 0:
        raise GraphError("n must be nonnegative")
    rng = as_generator(seed)
    total = n * (n - 1) // 2
    if total == 0:
        return Graph.empty(n)
    hits = np.flatnonzero(rng.random(total) < p).astype(np.int64)
    # row u of the strict upper triangle starts at offset u*n - u(u+1)/2
    rows = np.arange(n, dtype=np.int64)
    starts = rows * n - rows * (rows + 1) // 2
    u = np.searchsorted(starts, hits, side="right") - 1
    v = hits - starts[u] + u + 1
    return Graph.from_keys(n, u * n + v)


MODELS = ("regular", "degseq", "union", "two-ham", "gnp")


@dataclass(frozen=True)
class GenSpec:
    """A generator call as data: model tag, its parameters and a seed."""

    model: str
    n: int
    d: int | None = None
    degrees: tuple[int, ...] | None = None
    d1: int | None = None
    d2: int | None = None
    p: float | None = None
    seed: int = 0
    method: str = "auto"

    def __post_init__(self):
        m = self.model
        if m not in MODELS:
            raise GraphError(f"unknown model {m!r}; expected one of {', '.join(MODELS)}")
        if not 0 <= self.seed < 2**64:
            raise GraphError("seed must be a 64-bit nonnegative integer")
        if m == "regular":
            if self.d is None:
                raise GraphError("regular model needs d")
            _check_regular_params(self.n, self.d)
        elif m == "degseq":
            if self.degrees is None or len(self.degrees) != self.n:
                raise GraphError("degseq model needs n degrees")
            DegreeSequence(tuple(self.degrees))
        elif m == "union":
            if self.d1 is None or self.d2 is None or self.d1 < 3 or self.d2 < 3:
                raise GraphError("union model needs d1, d2 >= 3")
            if (self.n * self.d1) % 2 or (self.n * self.d2) % 2:
                raise GraphError("union model needs n*d1 and n*d2 even")
        elif m == "two-ham":
            if self.n < 5:
                raise GraphError("two-ham model needs n >= 5")
        elif self.p is None or not 0.0 <= self.p <= 1.0:
            raise GraphError("gnp model needs 0 <= p <= 1")

    @property
    def degree(self) -> float:
        """Nominal degree (np for the binomial model)."""
        m = self.model
        if m == "regular":
            return float(self.d)
        if m == "union":
            return float(self.d1 + self.d2)
        if m == "two-ham":
            return 4.0
        if m == "gnp":
            return self.p * (self.n - 1)
        return float(np.mean(self.degrees))

    def with_seed(self, seed: int) -> "GenSpec":
        return GenSpec(self.model, self.n, self.d, self.degrees, self.d1, self.d2, self.p, seed, self.method)

    def generate_parts(self, seed=None) -> tuple[Graph, ...]:
        """The sampled graph, preceded by its decomposition for union and two-ham."""
        rng = as_generator(self.seed if seed is None else seed)
        m = self.model
        if m == "regular":
            return (gen_regular(self.n, self.d, rng, method=self.method),)
        if m == "degseq":
            return (gen_degree_sequence(DegreeSequence(tuple(self.degrees)), rng),)
        if m == "union":
            return gen_union(self.n, self.d1, self.d2, rng, method="auto" if self.method == "auto" else self.method)
        if m == "two-ham":
            o1, o2, g = gen_two_hamilton_cycles(self.n, rng)
            return cycle_graph(self.n, o1), cycle_graph(self.n, o2), g
        return (gen_binomial(self.n, self.p, rng),)

    def generate(self, seed=None) -> Graph:
        return self.generate_parts(seed)[-1]


# ---------------------------------------------------------------------------
# Closed-form bounds


@dataclass
class AnalyticBounds:
    gamma: float | None = None
    nu: float | None = None
    lower: float | None = None
    upper: float | None = None
    window: float | None = None
    containment: float | None = None
    chernoff: float | None = None
    slack: float = 1.0
    flags: list[str] = field(default_factory=list)


def edge_prob_bounds(dseq: DegreeSequence, u: int, v: int) -> AnalyticBounds:
    """Switching bounds on P(uv is an edge) for a uniform graph with degrees ``dseq``.

    The asymptotic ``(1 - o(1))`` factor is not applied; it is reported as
    ``slack = 1`` and tolerances are the caller's business.
    """
    if u == v:
        raise GraphError("u and v must differ")
    du, dv = dseq.degrees[u], dseq.degrees[v]
    total = dseq.total
    big = dseq.max
    out = AnalyticBounds()
    num_lo = du * dv - du - dv
    den_lo = total + du * dv - 2 * du - 2 * dv
    den_hi = total + du * dv - (big + 1) * (du + dv)
    if num_lo <= 0:
        out.lower = 0.0
        out.flags.append("lower-clamped")
    elif den_lo <= 0:
        out.lower = 0.0
        out.flags.append("lower-degenerate")
    else:
        out.lower = num_lo / den_lo
    if den_hi <= 0:
        out.upper = 1.0
        out.flags.append("upper-degenerate")
    else:
        out.upper = min(1.0, du * dv / den_hi)
    return out


def mckay_quantities(dseq: DegreeSequence, g0: Graph) -> AnalyticBounds:
    """γ, ν and the probability window exp(-γ-γ²-ν) for a sequence and a forbidden graph."""
    if g0.n != dseq.n:
        raise GraphError("g0 must share the sequence's vertex set")
    if g0.max_degree > MAX_SEQ_DEGREE:
        raise GraphError("g0 maximum degree too large")
    total = dseq.total
    if total == 0:
        raise GraphError("empty degree sum")
    deg = dseq.degrees
    gamma = sum(d * (d - 1) // 2 for d in deg) / total
    nu = sum(deg[a] * deg[b] for a, b in g0.edge_list()) / total
    return AnalyticBounds(gamma=gamma, nu=nu, window=math.exp(-gamma - gamma * gamma - nu), flags=["o(1)-slack"])


def containment_bound(n: int, d: int, m: int, C: float, epsilon: float = 0.0) -> AnalyticBounds:
    """(C d / n)^m for a fixed m-edge set, flagged when outside m <= (1-ε)nd/2 or >= 1."""
    if C <= 0:
        raise GraphError("C must be positive")
    out = AnalyticBounds()
    if m > (1 - epsilon) * n * d / 2:
        out.flags.append("invalid-regime")
    val = (C * d / n) ** m
    if val >= 1:
        out.flags.append("vacuous")
    out.containment = val
    return out


def chernoff_tail(n: int, p: float, delta: float, which: str = "upper") -> float:
    """Exponential tail bound for a Bin(n, p) deviation of relative size ``delta``."""
    if delta <= 0:
        raise GraphError("delta must be positive")
    mean = n * p
    if which == "lower":
        return math.exp(-delta * delta * mean / 2)
    upper = math.exp(-mean * ((1 + delta) * math.log1p(delta) - delta))
    if which == "upper":
        return upper
    if which == "two-sided":
        return 2 * upper
    raise GraphError(f"unknown tail {which!r}")
