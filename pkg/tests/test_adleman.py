import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strandbench import adleman
from strandbench.adleman import DiGraph, Exhaustive, GraphError, PathPool, Stochastic
from strandbench.strands import DesignConstraints, reverse_complement

from conftest import DATA


@pytest.fixture(scope="module")
def fixture_graph():
    return DiGraph.from_json((DATA / "adleman7.json").read_text())


def test_graph_validation():
    with pytest.raises(GraphError):
        DiGraph.from_edges([0, 1], [(0, 0)])
    with pytest.raises(GraphError):
        DiGraph.from_edges([0, 1], [(0, 1), (0, 1)])
    with pytest.raises(GraphError):
        DiGraph.from_edges([0], [(0, 3)])
    with pytest.raises(GraphError):
        DiGraph.from_edges([], [])
    with pytest.raises(GraphError):
        DiGraph.from_json(json.dumps({"nodes": [0]}))


def test_graph_json_roundtrip(fixture_graph):
    assert DiGraph.from_json(fixture_graph.to_json()) == fixture_graph


def test_encoding_of_fixture(fixture_graph):
    enc = adleman.encode_graph(fixture_graph, seed=0)
    assert len(enc.node_seq) == 7
    assert all(len(s) == 20 for s in enc.node_seq.values())
    assert len(set(enc.node_seq.values())) == 7
    assert len(enc.edge_seq) == len(fixture_graph.edges)
    assert all(len(s) == 20 for s in enc.edge_seq.values())
    assert enc.splint_seq == {v: reverse_complement(s) for v, s in enc.node_seq.items()}
    u, v = 0, 1
    assert enc.edge_seq[(u, v)] == enc.node_seq[u][10:] + enc.node_seq[v][:10]


def test_encoding_single_node():
    enc = adleman.encode_graph(DiGraph.from_edges([0], []), seed=3)
    assert len(enc.node_seq) == 1 and enc.edge_seq == {}


def test_encoding_needs_even_length():
    with pytest.raises(ValueError):
        adleman.encode_graph(DiGraph.from_edges([0], []), DesignConstraints(length=7))


def _dfs_walks(g, k):
    # recursive reference enumeration
    out = set()

    def grow(w):
        out.add(w)
        if len(w) < k:
            for (a, b) in g.edges:
                if a == w[-1]:
                    grow(w + (b,))

    for v in g.nodes:
        grow((v,))
    return out


def test_chain_walks():
    g = DiGraph.from_edges([1, 2, 3], [(1, 2), (2, 3)])
    pool = adleman.assemble(g, Exhaustive(3))
    assert set(pool) == {(1,), (2,), (3,), (1, 2), (2, 3), (1, 2, 3)}
    assert all(n == 1 for n in pool.values())


def test_single_node_walks():
    pool = adleman.assemble(DiGraph.from_edges([5], []), Exhaustive(5))
    assert dict(pool) == {(5,): 1}


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.floats(0, 1), st.integers(0, 10_000), st.integers(1, 5))
def test_exhaustive_matches_dfs_oracle(n, p, seed, k):
    g = adleman.random_digraph(n, p, seed)
    assert set(adleman.assemble(g, Exhaustive(k))) == _dfs_walks(g, k)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.floats(0.2, 0.9), st.integers(0, 10_000))
def test_stochastic_walks_valid_and_subset(n, p, seed):
    g = adleman.random_digraph(n, p, seed)
    pool = adleman.assemble(g, Stochastic(300, seed=seed))
    assert sum(pool.values()) == 300
    assert all(adleman.is_walk(w, g) for w in pool)
    oracle = set(adleman.brute_force_hamiltonian(g, 0, n - 1))
    assert set(adleman.select_hamiltonian(pool, g, 0, n - 1)) <= oracle
    assert adleman.assemble(g, Stochastic(300, seed=seed)) == pool


def test_merge_pools_is_multiset_union():
    a, b = PathPool({(0,): 2}), PathPool({(0,): 1, (1,): 1})
    assert adleman.merge_pools([a, b]) == PathPool({(0,): 3, (1,): 1})


def test_fixture_unique_solution(fixture_graph):
    pool = adleman.assemble(fixture_graph, Exhaustive(7))
    sols = adleman.select_hamiltonian(pool, fixture_graph, 0, 6)
    assert sols == adleman.brute_force_hamiltonian(fixture_graph, 0, 6) == [(0, 1, 2, 3, 4, 5, 6)]
    assert all(adleman.is_hamiltonian(s, fixture_graph, 0, 6) for s in sols)


def test_fixture_stochastic_finds_solution(fixture_graph):
    pool = adleman.assemble(fixture_graph, Stochastic(20_000, seed=1))
    assert adleman.select_hamiltonian(pool, fixture_graph, 0, 6) == [(0, 1, 2, 3, 4, 5, 6)]


def test_no_path_graph():
    g = DiGraph.from_edges([0, 1, 2], [])
    assert adleman.select_hamiltonian(adleman.assemble(g, Exhaustive(3)), g, 0, 2) == []


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_five_node_oracle(seed):
    g = adleman.random_digraph(5, 0.5, seed)
    got = adleman.select_hamiltonian(adleman.assemble(g, Exhaustive(5)), g, 0, 4)
    assert got == adleman.brute_force_hamiltonian(g, 0, 4)
    assert all(adleman.is_hamiltonian(s, g, 0, 4) for s in got)


def test_strand_rendering(fixture_graph):
    enc = adleman.encode_graph(fixture_graph, seed=0)
    path = (0, 1, 2, 3, 4, 5, 6)
    pool = adleman.to_strands(PathPool({path: 3, (2,): 1}), enc)
    assert pool[enc.node_seq[2]] == 1
    full = "".join(enc.node_seq[v] for v in path)
    assert len(full) == 140 and pool[full] == 3
    assert pool.total == 4
    assert adleman.decode_strand(full, enc) == path


def test_to_strands_unknown_node(fixture_graph):
    enc = adleman.encode_graph(fixture_graph, seed=0)
    with pytest.raises(KeyError):
        adleman.to_strands(PathPool({(0, 99): 1}), enc)


def test_molecular_selection_on_fixture(fixture_graph):
    enc = adleman.encode_graph(fixture_graph, seed=0)
    strands = adleman.to_strands(adleman.assemble(fixture_graph, Exhaustive(7)), enc)
    got = adleman.molecular_selection(strands, fixture_graph, enc, 0, 6, gain=5)
    assert [adleman.decode_strand(s, enc) for s in got] == [(0, 1, 2, 3, 4, 5, 6)]
    assert list(got.values()) == [5]
