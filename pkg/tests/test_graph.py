from itertools import combinations

import pytest
from hypothesis import given

from cycleweave.gen import complete_bipartite
from cycleweave.graph import (
    GraphValidationError,
    bipartite_view,
    common_neighbors,
    degree,
    edge_count,
    from_edge_list,
    induced_subgraph,
)

from conftest import complete_graph, cycle_graph, path_graph, small_graphs, star


class TestFromEdgeList:
    def test_single_edge(self):
        g = from_edge_list(2, [(0, 1)])
        assert edge_count(g) == 1
        assert degree(g, 0) == degree(g, 1) == 1

    def test_dedup_symmetric_pairs(self):
        g = from_edge_list(3, [(0, 1), (1, 0)])
        assert edge_count(g) == 1

    def test_self_loop_rejected(self):
        with pytest.raises(GraphValidationError, match="self-loop"):
            from_edge_list(3, [(0, 0)])

    def test_out_of_range_names_line(self):
        with pytest.raises(GraphValidationError, match="line 7"):
            from_edge_list(3, [(0, 1), (1, 3)], lines=[6, 7])


@pytest.mark.parametrize(
    "g, v, expected",
    [(complete_graph(3), 0, 2), (from_edge_list(1, []), 0, 0), (star(5), 0, 5)],
)
def test_degree(g, v, expected):
    assert degree(g, v) == expected


def test_degree_out_of_range():
    with pytest.raises(GraphValidationError):
        degree(complete_graph(3), 3)


def test_common_neighbors():
    c4 = cycle_graph(4)  # a=0, b=1, c=2, d=3
    assert common_neighbors(c4, 0, 2) == (1, 3)
    assert common_neighbors(path_graph(3), 0, 2) == (1,)
    two = from_edge_list(4, [(0, 1), (2, 3)])
    assert common_neighbors(two, 0, 3) == ()
    with pytest.raises(GraphValidationError):
        common_neighbors(c4, 1, 1)


def test_induced_subgraph():
    tri = complete_graph(3)
    assert induced_subgraph(tri, range(3)) == tri
    sub = induced_subgraph(tri, [0, 1])
    assert edge_count(sub) == 1
    empty = induced_subgraph(tri, [])
    assert empty.vertex_count == 0 and edge_count(empty) == 0


def test_induced_subgraph_keeps_original_labels():
    g = from_edge_list(6, [(1, 4), (4, 5), (2, 3)])
    sub = induced_subgraph(g, [5, 1, 4])
    assert sub.labels == (1, 4, 5)
    assert sub.original_edges() == [(1, 4), (4, 5)]
    again = induced_subgraph(sub, [1, 2])
    assert again.labels == (4, 5)
    assert again.local_id(5) == 1


@pytest.mark.parametrize("g, m", [(from_edge_list(4, []), 0), (complete_graph(5), 10), (complete_bipartite(3, 3).graph, 9)])
def test_edge_count(g, m):
    assert edge_count(g) == m


class TestBipartiteView:
    def test_triangle_drops_within_side_edge(self):
        h = bipartite_view(complete_graph(3), [0], [1, 2])
        # |B| > |A| so the sides are swapped
        assert h.side_a == (1, 2) and h.side_b == (0,)
        assert h.edge_count == 2
        assert not h.has_edge(1, 2)
        h.check_invariants()

    def test_k22_keeps_all(self):
        k = complete_bipartite(2, 2)
        h = bipartite_view(k.graph, k.side_a, k.side_b)
        assert h.edge_count == 4

    def test_normalization_swaps_larger_b(self):
        g = complete_bipartite(2, 3).graph
        h = bipartite_view(g, [0, 1], [2, 3, 4])
        assert len(h.side_b) <= len(h.side_a)
        assert h.side_a == (2, 3, 4)

    def test_tie_keeps_order(self):
        k = complete_bipartite(2, 2)
        h = bipartite_view(k.graph, [2, 3], [0, 1])
        assert h.side_a == (2, 3)

    def test_overlap_rejected(self):
        with pytest.raises(GraphValidationError):
            bipartite_view(complete_graph(3), [0, 1], [1, 2])


@given(small_graphs())
def test_graph_invariants(g):
    g.check_invariants()
    assert 2 * edge_count(g) == sum(degree(g, v) for v in range(g.vertex_count))
    assert induced_subgraph(g, range(g.vertex_count)) == g
    for u, v in combinations(range(g.vertex_count), 2):
        assert len(common_neighbors(g, u, v)) <= min(degree(g, u), degree(g, v))
