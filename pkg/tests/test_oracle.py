import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from twinsurf.errors import TooLarge
from twinsurf.oracle import (exact_twinwidth, first_contraction_lower_bound, heawood_number,
                             naive_twinwidth, sample_lowerbound_witness)
from twinsurf.trigraph import ContractionSequence, replay


def as_dict(g):
    g = nx.convert_node_labels_to_integers(g)
    return {v: set(g[v]) for v in g}


def cycle(n):
    return {i: {(i + 1) % n, (i - 1) % n} for i in range(n)}


P4 = {0: {1}, 1: {0, 2}, 2: {1, 3}, 3: {2}}


@pytest.mark.parametrize("n", range(1, 10))
def test_complete_graphs(n):
    assert exact_twinwidth(as_dict(nx.complete_graph(n))) == 0


@pytest.mark.parametrize("n", range(1, 9))
def test_stars(n):
    assert exact_twinwidth(as_dict(nx.star_graph(n))) == 0


def test_small_values():
    assert exact_twinwidth(P4) == 1
    assert exact_twinwidth(cycle(5)) == 2
    assert first_contraction_lower_bound(cycle(5)) == 2
    assert exact_twinwidth(as_dict(nx.petersen_graph().subgraph(range(9)))) >= 1


def test_budget():
    with pytest.raises(TooLarge):
        exact_twinwidth(as_dict(nx.path_graph(10)))
    with pytest.raises(TooLarge):
        exact_twinwidth(P4, budget=3)


def test_twins_give_zero_lower_bound():
    assert first_contraction_lower_bound(as_dict(nx.complete_bipartite_graph(2, 3))) == 0


def test_heawood_numbers():
    assert [heawood_number(g) for g in range(1, 8)] == [6, 7, 7, 8, 9, 9, 10]


def test_witness_sizes():
    _, rep = sample_lowerbound_witness(3, seed=0)
    assert rep.n == 7
    _, rep = sample_lowerbound_witness(1, seed=0)
    assert rep.n == 6


def test_witness_report_is_deterministic():
    a = sample_lowerbound_witness(3, seed=5)[1].lines()
    b = sample_lowerbound_witness(3, seed=5)[1].lines()
    assert a == b


def test_witness_frozen_report():
    _, rep = sample_lowerbound_witness(3, seed=1)
    assert rep.lines()[3:7] == ["edges 9", "degree range 1 5 window ok",
                                "codegree range 0 2 window ok", "first contraction red degree 1"]


def test_oracle_agrees_with_naive_search_on_five_vertices():
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() == 5 and nx.is_connected(g):
            d = as_dict(g)
            assert exact_twinwidth(d) == naive_twinwidth(d)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 7), data=st.data())
def test_exact_sits_between_bounds(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True))
    g = {v: set() for v in range(n)}
    for a, b in edges:
        g[a].add(b)
        g[b].add(a)
    tw = exact_twinwidth(g)
    assert first_contraction_lower_bound(g) <= tw
    # any sequence at all is an upper bound
    seq = ContractionSequence(n)
    cur = 0
    for v in range(1, n):
        cur = seq.append(cur, v)
    assert tw <= replay(g, seq).max_red
