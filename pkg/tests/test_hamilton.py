from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import random_graph, small_graphs
from oracles import is_hamiltonian, longest_path_len
from rlab.graph import Graph, GraphError
from rlab.hamilton import (
    decide_hamiltonian,
    hamilton_cycle_heuristic,
    is_hamilton_cycle,
    is_hamiltonian_exact,
    is_path,
    longest_path_exact,
    longest_path_heuristic_path,
    longest_path_length,
)
from rlab.models import gen_regular


def test_exact_examples():
    for n in (3, 5, 12, 25):
        d = is_hamiltonian_exact(Graph.cycle(n))
        assert d.hamiltonian and is_hamilton_cycle(Graph.cycle(n), d.cycle)
    assert not is_hamiltonian_exact(Graph.petersen()).hamiltonian
    k4e = Graph.complete(4).difference(Graph.from_edges(4, [(0, 1)]))
    assert is_hamiltonian_exact(k4e).hamiltonian
    with pytest.raises(GraphError):
        is_hamiltonian_exact(Graph.cycle(31))


@given(small_graphs(min_n=1, max_n=9))
@settings(max_examples=150, deadline=None)
def test_exact_matches_permutation_oracle(g):
    d = is_hamiltonian_exact(g)
    assert d.hamiltonian == is_hamiltonian(g.n, g.edge_list())
    if d.hamiltonian:
        assert is_hamilton_cycle(g, d.cycle)


@given(small_graphs(min_n=1, max_n=9))
@settings(max_examples=150, deadline=None)
def test_longest_path_matches_oracle(g):
    assert longest_path_length(g) == longest_path_len(g.n, g.edge_list())
    p = longest_path_exact(g)
    assert is_path(g, p) and len(p) - 1 == longest_path_length(g)


def test_backtracking_large_instances():
    for n in (24, 26, 28):
        g = gen_regular(n, 3, n)
        d = is_hamiltonian_exact(g)
        assert d.method in ("backtracking", "structural")
        if d.hamiltonian:
            assert is_hamilton_cycle(g, d.cycle)
    # not 1-tough: removing 3 hub vertices leaves 4 five-cycles
    edges = []
    for c in range(4):
        base = 3 + 5 * c
        edges += [(base + i, base + (i + 1) % 5) for i in range(5)]
        edges += [(h, base + i) for h in range(3) for i in range(5)]
    g = Graph.from_edges(23, edges)
    d = is_hamiltonian_exact(g)
    assert not d.hamiltonian and d.method == "backtracking"


def test_backtracking_vs_dp_on_same_graphs():
    from rlab.hamilton import _backtrack, hamilton_cycle_dp
    rng = np.random.default_rng(4)
    for _ in range(60):
        n = int(rng.integers(5, 15))
        g = random_graph(rng, n, float(rng.uniform(0.2, 0.6)))
        dp = hamilton_cycle_dp(g)
        if g.min_degree < 2 or not g.is_connected():
            continue
        bt = _backtrack(g, None)
        assert (dp is not None) == (bt is not None)
        if bt is not None:
            assert is_hamilton_cycle(g, bt)


def test_heuristic():
    g = gen_regular(400, 6, 3)
    cyc = hamilton_cycle_heuristic(g, 10, 1)
    assert cyc is not None and is_hamilton_cycle(g, cyc)
    assert hamilton_cycle_heuristic(Graph.petersen(), 20, 0) is None
    p = longest_path_heuristic_path(Graph.petersen(), 100, 0)
    assert len(p) == 10 and is_path(Graph.petersen(), p)
    for n in (5, 17):
        p = longest_path_heuristic_path(Graph.cycle(n), 10, 0)
        assert len(p) == n


def test_decide_large():
    g = gen_regular(100, 4, 2)
    d = decide_hamiltonian(g)
    assert d.hamiltonian and is_hamilton_cycle(g, d.cycle)
    h = Graph.from_edges(40, [(i, i + 1) for i in range(39)])
    d = decide_hamiltonian(h)
    assert not d.hamiltonian and d.exact and d.method == "structural"
