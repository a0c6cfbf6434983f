from fractions import Fraction
from itertools import combinations

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from occucert.families import complete, connected_graphs, connected_triangle_free_graphs, cycle, path, star
from occucert.graph import (
    GraphError,
    disparity_energy,
    from_edge_list,
    laplacian,
    mad,
    neighborhood_mad_profile,
    normalized_laplacian,
    parse_edge_list,
    read_edge_list,
    signless_laplacian,
    write_edge_list,
)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return from_edge_list(n, chosen)


def brute_mad(g):
    best = Fraction(0)
    for k in range(1, g.n + 1):
        for sub in combinations(range(g.n), k):
            s = set(sub)
            e = sum(1 for u, v in g.edges if u in s and v in s)
            best = max(best, Fraction(2 * e, k))
    return best


def test_edge_list_construction():
    assert from_edge_list(2, [(0, 1)]).edges == ((0, 1),)
    star = from_edge_list(3, [(0, 1), (0, 2)])
    assert star.degrees == (2, 1, 1)
    dup = from_edge_list(3, [(0, 1), (1, 0)])
    assert dup.edges == ((0, 1),) and dup.isolated_vertices() == [2]


@pytest.mark.parametrize("pairs", [[(0, 0)], [(0, 3)], [(-1, 1)]])
def test_bad_edges_rejected(pairs):
    with pytest.raises(GraphError):
        from_edge_list(3, pairs)


def test_laplacians_small():
    assert np.array_equal(laplacian(complete(2)), [[1, -1], [-1, 1]])
    assert np.array_equal(laplacian(star(2)), [[2, -1, -1], [-1, 1, 0], [-1, 0, 1]])
    assert not laplacian(from_edge_list(3, [])).any()
    assert np.allclose(normalized_laplacian(complete(2)), [[1, -1], [-1, 1]])
    assert np.allclose(np.linalg.eigvalsh(normalized_laplacian(cycle(4))), [0, 1, 1, 2])
    assert np.max(np.abs(np.linalg.eigvalsh(normalized_laplacian(star(2))))) == pytest.approx(2)


def test_normalized_laplacian_rejects_isolated():
    with pytest.raises(GraphError):
        normalized_laplacian(from_edge_list(3, [(0, 1)]))


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_laplacian_matches_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    assert np.array_equal(laplacian(g), nx.laplacian_matrix(h, nodelist=range(g.n)).toarray())
    sl = signless_laplacian(g)
    assert np.min(np.linalg.eigvalsh(sl)) >= -1e-12
    if not g.isolated_vertices():
        assert np.max(np.abs(np.linalg.eigvalsh(normalized_laplacian(g)))) <= 2 + 1e-12


def test_mad_examples():
    assert mad(complete(3)) == 2
    assert mad(path(3)) == Fraction(4, 3)
    assert mad(from_edge_list(4, [])) == 0
    with pytest.raises(GraphError):
        mad(from_edge_list(0, []))


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_mad_matches_subset_bruteforce(g):
    assert mad(g) == brute_mad(g)


def test_neighborhood_mad_examples():
    assert neighborhood_mad_profile(cycle(5)) == [0] * 5
    assert neighborhood_mad_profile(complete(4)) == [2] * 4
    # vertex 0 sees the path 1-2-3
    g = from_edge_list(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)])
    assert neighborhood_mad_profile(g)[0] == Fraction(4, 3)


def test_disparity_energy():
    assert disparity_energy(cycle(6)) == 0
    assert disparity_energy(complete(4)) == 0
    assert disparity_energy(star(2)) == 2
    assert disparity_energy(star(4)) == 36


def test_edge_list_roundtrip(tmp_path):
    g = from_edge_list(6, [(0, 1), (1, 2), (4, 5), (0, 5)])
    path_ = tmp_path / "g.txt"
    write_edge_list(g, path_)
    assert read_edge_list(path_) == g


@pytest.mark.parametrize("text", ["", "3\n", "2 1\n0 x\n", "2 2\n0 1\n", "2 1\n0 1 1\n", "2 1\n0 5\n"])
def test_malformed_edge_lists(text):
    with pytest.raises(GraphError):
        parse_edge_list(text)


def test_components_and_induced():
    g = from_edge_list(5, [(0, 1), (3, 4)])
    assert g.components() == [[0, 1], [2], [3, 4]]
    sub, vmap = g.induced([1, 3, 4])
    assert vmap == [1, 3, 4] and sub.edges == ((1, 2),)


@pytest.mark.parametrize("n", range(1, 8))
def test_connected_graph_counts_match_atlas(n):
    atlas = [h for h in nx.graph_atlas_g() if h.number_of_nodes() == n and nx.is_connected(h)]
    assert len(connected_graphs(n)) == len(atlas)


@pytest.mark.parametrize("n", range(1, 8))
def test_triangle_free_counts_match_atlas(n):
    atlas = [
        h for h in nx.graph_atlas_g()
        if h.number_of_nodes() == n and nx.is_connected(h) and sum(nx.triangles(h).values()) == 0
    ]
    got = connected_triangle_free_graphs(n)
    assert len(got) == len(atlas)
    assert all(g.is_triangle_free() and g.is_connected() for g in got)


def test_larger_triangle_free_counts():
    # OEIS A024607
    assert [len(connected_triangle_free_graphs(n)) for n in (8, 9)] == [267, 1380]
