"""Acceptance suite.  Each test prints one PASS/FAIL line and asserts it.

Runtime budgets are part of the pass condition (measured on the machine at hand).
"""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from conftest import random_graph
from oracles import booster_pairs, graphs_with_degrees
from rlab.classic import (
    conn_certificate,
    matching_attack,
    matching_bound,
    matching_certificate,
    partition_attack,
    partition_bound,
)
from rlab.connectivity import edge_connectivity, vertex_connectivity
from rlab.game import BREAKERS, LehmanMaker, build_board, connected_goal, exhaustive_maker_wins, play_thm6
from rlab.graph import Graph
from rlab.hamilton import is_hamilton_cycle, is_hamiltonian_exact
from rlab.hamres import ResilienceParams, quasirandom_check, resilience_of_graph
from rlab.matching import has_perfect_matching, perfect_matching
from rlab.models import DegreeSequence, complement, edge_prob_bounds, gen_binomial, gen_regular, is_graphic
from rlab.posa import exact_boosters, expander_check, witnessed_boosters
from rlab.rng import child_seed
from rlab.spectral import batch_mixing_violations, lam, lambda_report


@pytest.fixture
def verdict(capsys):
    def emit(num: int, name: str, ok: bool, detail: str, elapsed: float, budget: float):
        within = elapsed <= budget
        line = f"{'PASS' if ok and within else 'FAIL'} [{num:2d}] {name}: {detail} ({elapsed:.1f}s of {budget:.0f}s)"
        with capsys.disabled():
            print("\n" + line)
        assert ok and within, line

    return emit


def test_regular_generator_is_uniform(verdict):
    t0 = time.perf_counter()
    target = sorted(graphs_with_degrees((2,) * 6), key=sorted)
    index = {g: i for i, g in enumerate(target)}
    counts = np.zeros(len(target), dtype=np.int64)
    rng = np.random.default_rng(child_seed(1, "uniformity"))
    for _ in range(70_000):
        counts[index[frozenset(gen_regular(6, 2, rng).edge_list())]] += 1
    p = stats.chisquare(counts).pvalue
    ok = len(target) == 70 and p > 0.001
    verdict(1, "pairing uniformity n=6 d=2", ok, f"{len(target)} classes, chi-square p={p:.4f}",
            time.perf_counter() - t0, 60)


def test_fixed_pair_frequency(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(2, "pair"))
    trials = 50_000
    hits = sum(gen_regular(30, 3, rng).has_edge(0, 1) for _ in range(trials))
    p = 3 / 29
    sigma = math.sqrt(p * (1 - p) / trials)
    z = (hits / trials - p) / sigma
    verdict(2, "edge probability n=30 d=3", abs(z) <= 4, f"freq={hits / trials:.5f} vs {p:.5f}, z={z:+.2f}",
            time.perf_counter() - t0, 60)


def test_switching_bounds_sandwich(verdict):
    t0 = time.perf_counter()
    seqs = pairs = 0
    bad = []
    for n in (6, 7, 8):
        # sorted sequences suffice: relabelling permutes pairs and bounds alike
        for degs in itertools.combinations_with_replacement(range(3, -1, -1), n):
            if sum(degs) == 0 or not is_graphic(degs):
                continue
            graphs = graphs_with_degrees(degs)
            seqs += 1
            freq = Counter(e for g in graphs for e in g)
            ds = DegreeSequence(tuple(degs))
            for u, v in itertools.combinations(range(n), 2):
                exact = freq[(u, v)] / len(graphs)
                b = edge_prob_bounds(ds, u, v)
                pairs += 1
                if not 0.75 * b.lower - 1e-12 <= exact <= 1.05 * b.upper + 1e-12:
                    bad.append((degs, u, v))
    verdict(3, "switching bounds vs enumeration", not bad and seqs > 0,
            f"{seqs} sequences, {pairs} pairs, {len(bad)} outside", time.perf_counter() - t0, 300)


def test_spectral_bounds_never_violated(verdict):
    t0 = time.perf_counter()
    total = checked = 0
    for d in (3, 10):
        for s in range(10):
            g = gen_regular(500, d, child_seed(4, d, s), method="pairing" if d == 3 else "switch")
            rng = np.random.default_rng(child_seed(4, "pairs", d, s))
            total += batch_mixing_violations(g, lam(g), rng, 10_000)
            checked += 10_000
    verdict(4, "mixing, boundary and density bounds", total == 0, f"{total} violations in {checked} pairs",
            time.perf_counter() - t0, 120)


def test_cubic_second_eigenvalue(verdict):
    t0 = time.perf_counter()
    limit = 2 * math.sqrt(2) + 0.3
    vals = [lam(gen_regular(1000, 3, child_seed(5, s))) for s in range(100)]
    good = sum(v <= limit for v in vals)
    verdict(5, "cubic lambda n=1000", good >= 95, f"{good}/100 below {limit:.3f}, max={max(vals):.3f}",
            time.perf_counter() - t0, 120)


def test_booster_exactness(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(6, "boosters"))
    mismatch = leaks = 0
    nonempty = 0
    for _ in range(500):
        n = int(rng.integers(1, 11))
        g = random_graph(rng, n, float(rng.uniform(0.1, 0.8)))
        exact = exact_boosters(g).pairs
        nonempty += bool(exact)
        mismatch += exact != booster_pairs(n, g.edge_list())
        leaks += not witnessed_boosters(g, seed=int(rng.integers(2**31))).pairs <= exact
    verdict(6, "exact and witnessed boosters", mismatch == 0 and leaks == 0,
            f"500 graphs ({nonempty} with boosters), {mismatch} mismatches, {leaks} witnessed outside exact",
            time.perf_counter() - t0, 120)


def test_small_expanders(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(7, "expanders"))
    certified = disconnected = nonham = short = 0
    tried = 0
    while tried < 600:
        n = int(rng.integers(7, 21))
        # the size-2εn window must be nonempty and below n, so 1/(2n) <= ε < 1/12
        eps = float(rng.uniform(1 / (2 * n), 1 / 12))
        g = random_graph(rng, n, float(rng.uniform(0.4, 1.0)))
        tried += 1
        if expander_check(g, eps).status != "certified":
            continue
        certified += 1
        if not g.is_connected():
            disconnected += 1
            continue
        if is_hamiltonian_exact(g).hamiltonian:
            continue
        nonham += 1
        need = n / 4 + eps * n
        big = sum(len(b) >= need for b in exact_boosters(g).per_vertex(n)) if n <= 10 else None
        if big is None or big < need:
            short += 1
    ok = certified > 0 and disconnected == 0 and short == 0
    verdict(7, "certified expanders n<=20", ok,
            f"{certified}/{tried} certified, {disconnected} disconnected, {nonham} non-Hamiltonian, "
            f"{short} lacking booster-rich vertices", time.perf_counter() - t0, 300)


def _bounded_subgraph(g: Graph, cap: int, rng, kind: str) -> Graph:
    """An edge set of g with maximum degree <= cap, random or concentrated."""
    n = g.n
    if kind == "random":
        order = rng.permutation(g.edge_list())
    elif kind == "ball":
        # edges near one vertex first: the most local damage the cap allows
        v = int(rng.integers(n))
        near = set(g.adj[v]) | {v}
        es = g.edge_list()
        order = sorted(es, key=lambda e: (-(e[0] in near) - (e[1] in near), rng.random()))
    else:
        # edges across a random small cut first
        side = set(rng.choice(n, size=max(1, cap), replace=False).tolist())
        es = g.edge_list()
        order = sorted(es, key=lambda e: ((e[0] in side) == (e[1] in side), rng.random()))
    deg = np.zeros(n, dtype=np.int64)
    keep = []
    for u, v in order:
        u, v = int(u), int(v)
        if deg[u] < cap and deg[v] < cap:
            keep.append((u, v))
            deg[u] += 1
            deg[v] += 1
    return Graph.from_edges(n, keep)


def test_certificates_never_lie(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(8, "certificates"))
    kinds = ("random", "ball", "cut")
    lines = []
    ok = True

    # edge connectivity: 60-regular graphs on 300 vertices sit inside the certified regime
    trials = losses = 0
    graphs = [gen_regular(300, 60, child_seed(8, "edge", i), method="switch") for i in range(4)]
    for g in graphs:
        rep = lambda_report(g)
        cert = conn_certificate(g, rep.lam, "edge", 0.5)
        if not cert.valid or cert.tolerated_delta < 1:
            continue
        for t in range(50):
            h = _bounded_subgraph(g, int(rng.integers(1, cert.tolerated_delta + 1)), rng, kinds[t % 3])
            trials += 1
            losses += edge_connectivity(g.difference(h)) < g.max_degree - h.max_degree
    ok &= trials >= 200 and losses == 0
    lines.append(f"edge {trials} trials/{losses} losses")

    # vertex connectivity: only trials whose hypotheses are verified count
    trials = losses = conditional = 0
    for i in range(4):
        g = gen_regular(300, 60, child_seed(8, "vertex", i), method="switch")
        lam_g = lambda_report(g).lam
        for eps in (0.5, 2.0, (60 - lam_g) / 2 - 1):
            cert = conn_certificate(g, lam_g, "vertex", eps)
            if not cert.valid:
                conditional += 1
                continue
            for t in range(50):
                h = _bounded_subgraph(g, int(rng.integers(1, cert.tolerated_delta + 1)), rng, kinds[t % 3])
                trials += 1
                losses += vertex_connectivity(g.difference(h)) < g.max_degree - h.max_degree
    ok &= trials >= 200 and losses == 0
    lines.append(f"vertex {trials} verified trials/{losses} losses ({conditional} certificates unverifiable)")

    # perfect matching: the tolerance is positive only once d is in the thousands
    trials = losses = 0
    for i in range(2):
        g = complement(gen_regular(3400, 3, child_seed(8, "pm", i)))
        cert = matching_certificate(g, lambda_report(g).lam)
        if not cert.valid or cert.tolerated_delta < 1:
            continue
        for t in range(100):
            cap = int(rng.integers(1, cert.tolerated_delta + 1))
            h = gen_regular(g.n, cap, child_seed(8, "pmh", i, t), method="switch")
            h = Graph.from_keys(g.n, h.edge_keys[g.contains_keys(h.edge_keys)])
            trials += 1
            losses += not has_perfect_matching(g.difference(h))
    ok &= trials >= 200 and losses == 0
    lines.append(f"matching {trials} trials/{losses} losses")
    verdict(8, "deterministic certificates", bool(ok), "; ".join(lines), time.perf_counter() - t0, 300)


def test_constructive_attacks_meet_bounds(verdict):
    t0 = time.perf_counter()
    part_ok = match_ok = 0
    worst_p = worst_m = 0
    for i in range(10):
        g = gen_regular(5000, 500, child_seed(9, "partition", i), method="switch")
        r = partition_attack(g, child_seed(9, "attack", i))
        worst_p = max(worst_p, r.delta_h)
        part_ok += r.success and r.delta_h <= 472.9 and not g.difference(r.h).is_connected()
    for i in range(10):
        g = gen_regular(1000, 100, child_seed(9, "matching", i), method="switch")
        r = matching_attack(g, child_seed(9, "mattack", i))
        worst_m = max(worst_m, r.delta_h)
        match_ok += r.success and r.delta_h <= 94.9 and not perfect_matching(g.difference(r.h)).perfect
    verdict(9, "partition and matching attacks", part_ok == 10 and match_ok == 10,
            f"partition {part_ok}/10 (max Δ={worst_p}, bound {partition_bound(500):.1f}); "
            f"matching {match_ok}/10 (max Δ={worst_m}, bound {matching_bound(100):.1f})",
            time.perf_counter() - t0, 600)


def test_hamiltonicity_resilience_sandwich(verdict):
    t0 = time.perf_counter()
    params = ResilienceParams(0.5)
    target = params.target(30)
    survived = sandwich = upper_ok = 0
    flagged = True
    # the stated formula d/2 + 2 sqrt(d ln d) + 2 evaluates to 37.2 at d=30
    formula = 30 / 2 + 2 * math.sqrt(30 * math.log(30)) + 2
    for s in range(20):
        seed = child_seed(10, s)
        g = gen_regular(400, 30, seed, method="switch")
        rec = resilience_of_graph(g, params, seed)
        survived += rec["empirical_lower"] is not None and rec["empirical_lower"] >= target
        sandwich += rec["sandwich"]
        upper_ok += rec["attack_upper"] is not None and rec["attack_upper"] <= 29
        flagged &= rec["matching_bound_vacuous"] and abs(rec["matching_bound"] - formula) < 1e-9
    ok = target == 3 and survived >= 19 and sandwich == 20 and upper_ok == 20 and flagged
    verdict(10, "Hamiltonicity resilience d=30", ok,
            f"suite failed at r<={target} on {survived}/20, attack_upper<=29 on {upper_ok}/20, "
            f"sandwich {sandwich}/20, matching bound {matching_bound(30):.1f} flagged vacuous={flagged}",
            time.perf_counter() - t0, 900)


def test_maker_breaker_tournament(verdict):
    t0 = time.perf_counter()
    n = 200
    wins = Counter()
    budget_breaks = bad_witness = 0
    for s in range(50):
        dec = build_board(n, 24, 24, child_seed(11, "board", s))
        for b in BREAKERS:
            res = play_thm6(dec, b, child_seed(11, "game", s))
            c = res.counts
            budget_breaks += c["conn"] > n or c["degree"] > c["k"] * n or c["booster"] > n
            if res.winner == "maker":
                if is_hamilton_cycle(Graph.from_edges(n, res.maker_edges), res.witness):
                    wins[b] += 1
                else:
                    bad_witness += 1
    ok = all(wins[b] >= 45 for b in BREAKERS) and budget_breaks == 0 and bad_witness == 0
    table = ", ".join(f"{b} {wins[b]}/50" for b in BREAKERS)
    verdict(11, "Maker-Breaker n=200 degree 48 (implemented breakers only)", ok,
            f"{table}; {budget_breaks} budget breaches; {bad_witness} unverified wins", time.perf_counter() - t0, 900)


def test_tiny_connectivity_game(verdict):
    t0 = time.perf_counter()
    t1 = Graph.path(5)
    t2 = Graph.from_edges(5, [(0, 2), (0, 3), (1, 3), (1, 4)])
    ok, leaves, line = exhaustive_maker_wins(t1.union(t2), lambda: LehmanMaker(t1, t2), connected_goal)
    verdict(12, "exhaustive pairing game n=5", ok and leaves > 0, f"{leaves} terminal lines, losing line: {line}",
            time.perf_counter() - t0, 120)


def _random_capped_deletion(g: Graph, cap: int, rng) -> Graph:
    deg = np.zeros(g.n, dtype=np.int64)
    keep = []
    for u, v in rng.permutation(g.edge_list()):
        if deg[u] < cap and deg[v] < cap:
            keep.append((int(u), int(v)))
            deg[u] += 1
            deg[v] += 1
    return Graph.from_edges(g.n, keep)


def test_binomial_quasirandom_pipeline(verdict):
    t0 = time.perf_counter()
    n, eps = 2000, 0.5
    p = 20 * math.log(n) / n
    cap = math.floor((1 - eps) * n * p / 2)
    refuted = bogus = 0
    reasons = Counter()
    for s in range(50):
        g = gen_binomial(n, p, child_seed(13, "gnp", s))
        rng = np.random.default_rng(child_seed(13, "h", s))
        rest = g.difference(_random_capped_deletion(g, cap, rng))
        v = quasirandom_check(rest, n * p, eps, "heuristic", seed=child_seed(13, "qr", s), p1_samples=2000,
                              p2_samples=200, greedy_seeds=50)
        if v.refuted:
            refuted += 1
            reasons.update(k for k, st in (("P0", v.p0), ("P1", v.p1), ("P2", v.p2)) if st.status == "refuted")
            bogus += not _refutation_recomputes(rest, v, n * p, eps)
    verdict(13, "binomial quasirandomness after deletions", refuted <= 2 and bogus == 0,
            f"refuted {refuted}/50 (by property: {dict(reasons)}; {bogus} witnesses failed to recompute), "
            f"deletion cap {cap}", time.perf_counter() - t0, 300)


def _refutation_recomputes(g: Graph, v, d: float, eps: float) -> bool:
    mu = v.params["mu"]
    ok = True
    if v.p0.status == "refuted":
        deg = g.degrees[v.p0.witness]
        ok &= not d / 2 <= deg <= 2 * d
    if v.p1.status == "refuted":
        U = list(v.p1.witness)
        ok &= len(U) < mu * g.n / 14 and g.e_inside(U) > mu * d * len(U) / 14
    if v.p2.status == "refuted":
        U, W = v.p2.witness
        need = d * (1 - eps / 4) / g.n * len(U) * len(W) - (1 - eps) * d / 2 * len(U)
        ok &= not set(U) & set(W) and g.e_between(list(U), list(W)) < need
    return bool(ok)
