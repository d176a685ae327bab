from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import random_graph
from oracles import quasirandom_brute
from rlab.graph import Graph, GraphError
from rlab.hamres import (
    ResilienceParams,
    dirac_tolerance,
    estimate_resilience,
    ham_attack_suite,
    min_degree_attack,
    quasirandom_check,
    resilience_of_graph,
    sandwich_ok,
    thinning,
)
from rlab.models import GenSpec, complement, gen_regular


def test_params():
    p = ResilienceParams(0.5)
    assert p.mu == 0.125 and p.beta == 0.125 / 160
    assert p.degrees(30) == (10, 20) and sum(p.degrees(31)) == 31
    assert p.target(30) == 3
    with pytest.raises(GraphError):
        ResilienceParams(0)
    with pytest.raises(GraphError):
        ResilienceParams(1.5)


def test_p0_examples():
    g = gen_regular(40, 5, seed=1)
    assert quasirandom_check(g, 5, 0.5).p0.status == "certified"
    iso = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 3)])
    v = quasirandom_check(iso, 2, 0.5)
    assert v.p0.status == "refuted" and v.p0.witness == 4 and v.refuted


def test_exact_matches_brute_force():
    rng = np.random.default_rng(8)
    for _ in range(60):
        n = int(rng.integers(3, 9))
        g = random_graph(rng, n, float(rng.uniform(0.2, 0.9)))
        d = float(rng.integers(1, n))
        eps = float(rng.uniform(0.2, 1.0))
        mu = float(rng.uniform(3, 14))
        beta = float(rng.uniform(0.05, 0.3))
        v = quasirandom_check(g, d, eps, "exact", mu=mu, beta=beta)
        p1, p2 = quasirandom_brute(n, g.edge_list(), d, eps, mu, beta)
        assert (v.p1.status == "certified") == p1
        assert (v.p2.status == "certified") == p2
        if not p1:
            U = v.p1.witness
            assert g.e_inside(list(U)) > mu * d * len(U) / 14
        if not p2:
            U, W = v.p2.witness
            need = d * (1 - eps / 4) / n * len(U) * len(W) - (1 - eps) * d / 2 * len(U)
            assert g.e_between(U, W) < need


def test_spectral_route_complete_graph():
    v = quasirandom_check(Graph.complete(300), 299, 0.5, "heuristic")
    assert v.certified and v.p1.detail == "spectral mixing bound"


def test_spectral_certificates_survive_deletions():
    # complement of a cubic graph: d = 596, λ <= 1 + 2·2.83, well below μd/28 at ε = 0.8
    host = complement(gen_regular(600, 3, seed=2))
    d, eps = host.max_degree, 0.8
    rng = np.random.default_rng(9)
    cap = int((1 - eps) * d / 2)
    for t in range(3):
        h = min_degree_attack(host, int(rng.integers(1, cap + 1)))
        g = host.difference(h)
        v = quasirandom_check(g, d, eps, "heuristic", host=host, seed=t, p1_samples=200, p2_samples=50)
        assert v.p0.status != "refuted"
        assert v.p1.status == "certified" and v.p2.status in {"certified", "unknown"}
        assert not v.refuted


def test_greedy_finds_dense_clusters():
    g = Graph.complete(8).union(Graph.empty(8))
    edges = g.edge_list() + [(i, i + 1) for i in range(7, 999)]
    big = Graph.from_edges(1000, edges)
    v = quasirandom_check(big, 2, 0.5, "heuristic", mu=1.0, p1_samples=10)
    assert v.p1.status == "refuted"
    U = v.p1.witness
    assert big.e_inside(list(U)) > 2 * len(U) / 14


def test_thinning():
    g = gen_regular(200, 10, seed=3, method="switch")
    for s in range(5):
        t = thinning(g, 0.1, s)
        assert t.is_subgraph_of(g)
        assert 100 <= t.m <= 200 and t.min_degree >= 1
    assert thinning(g, 1.0, 0) == g
    t = thinning(g, 0.35, 1, d=10)
    assert 4 * 100 <= t.m <= 4 * 200
    with pytest.raises(GraphError):
        thinning(Graph.path(5), 0.9, 0, d=2)


def test_attack_suite_examples():
    c = Graph.cycle(8)
    reps = ham_attack_suite(c, 1, 0)
    assert any(r.status == "success" for r in reps)
    assert all(r.h.max_degree <= 1 for r in reps)
    reps = ham_attack_suite(c, 0, 0)
    assert all(r.status == "survived" and r.h.m == 0 for r in reps)
    g = gen_regular(20, 6, seed=4)
    reps = ham_attack_suite(g, 6, 0)
    assert any(r.status == "success" for r in reps)
    with pytest.raises(GraphError):
        ham_attack_suite(g, 7, 0)


def test_resilience_of_cycle_and_sandwich():
    rec = resilience_of_graph(Graph.cycle(10), ResilienceParams(0.5), 1)
    assert rec["attack_upper"] == 1 and rec["empirical_lower"] == 0 and rec["sandwich"]
    k = Graph.complete(12)
    rec = resilience_of_graph(k, ResilienceParams(0.5), 1)
    assert rec["certified_lower"] == dirac_tolerance(k) == 5
    assert rec["sandwich"] and rec["attack_upper"] >= rec["certified_lower"]
    assert sandwich_ok(1, 2, 3) and not sandwich_ok(3, 2, None)


def test_suite_subsumption():
    params = ResilienceParams(0.5)
    for s in range(4):
        g = gen_regular(16, 5, seed=s)
        full = resilience_of_graph(g, params, s)
        part = resilience_of_graph(g, params, s, attacks=("min-degree",))
        assert full["attack_upper"] <= part["attack_upper"]


def test_estimate_resilience():
    est = estimate_resilience(GenSpec("regular", 14, d=4), ResilienceParams(0.5), 3, seed=5)
    assert len(est.samples) == 3
    for rec in est.samples:
        assert rec["sandwich"]
    ups = [r["attack_upper"] for r in est.samples]
    assert est.attack_upper == (None if None in ups else max(ups))
    with pytest.raises(GraphError):
        estimate_resilience(GenSpec("regular", 14, d=4), ResilienceParams(0.5), 0, seed=5)
