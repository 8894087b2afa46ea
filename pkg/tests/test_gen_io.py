import json
from fractions import Fraction
import logging
from itertools import combinations
from math import comb, sqrt

import pytest
from hypothesis import given, strategies as st

from cycleweave.edgelist import format_edge_list, parse_edge_list, read_edge_list, write_edge_list, write_metadata
from cycleweave.gen import (
    GenSpec,
    bipartite_random,
    clique_sizes,
    complete_bipartite,
    disjoint_cliques,
    generate,
    parts_from_beta,
    uniform_random,
)
from cycleweave.graph import GraphValidationError

from conftest import complete_graph


@pytest.mark.parametrize("n, parts, edges", [(16, 4, 24), (5, 1, 10), (5, 5, 0)])
def test_disjoint_cliques(n, parts, edges):
    g = disjoint_cliques(n, parts)
    assert g.edge_count == edges
    assert g.vertex_count == n


def test_disjoint_cliques_larger_first_consecutive():
    g = disjoint_cliques(10, 3)
    assert clique_sizes(10, 3) == [4, 3, 3]
    assert g.has_edge(0, 3) and not g.has_edge(3, 4) and g.has_edge(4, 6) and g.has_edge(7, 9)


@given(st.integers(1, 60).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_disjoint_cliques_edge_formula(np_):
    n, parts = np_
    sizes = clique_sizes(n, parts)
    assert sum(sizes) == n and max(sizes) - min(sizes) <= 1
    assert disjoint_cliques(n, parts).edge_count == sum(comb(s, 2) for s in sizes)


def test_disjoint_cliques_bad_parts():
    with pytest.raises(ValueError):
        disjoint_cliques(5, 6)


def test_parts_from_beta():
    assert parts_from_beta(256, 0.25) == 4
    assert parts_from_beta(10, 0.0) == 1


def test_uniform_random_extremes():
    assert uniform_random(12, 0, seed=3).edge_count == 0
    assert uniform_random(12, 1, seed=3).edge_count == comb(12, 2)


def test_uniform_random_regression():
    g = uniform_random(100, "1/2", seed=2024)
    mean, sd = comb(100, 2) / 2, sqrt(comb(100, 2)) / 2
    assert abs(g.edge_count - mean) <= 5 * sd
    # frozen PCG64 output
    assert g.edge_count == 2463
    assert uniform_random(100, "1/2", seed=2024) == g
    assert uniform_random(100, "1/2", seed=2025) != g


def test_uniform_random_rejects_bad_p():
    with pytest.raises(ValueError):
        uniform_random(5, 2, seed=0)
    with pytest.raises(TypeError):
        uniform_random(5, 0.5, seed=0)


@pytest.mark.parametrize("a, b", [(2, 2), (3, 3), (5, 5)])
def test_complete_bipartite(a, b):
    k = complete_bipartite(a, b)
    assert k.edge_count == a * b
    k.check_invariants()


def test_bipartite_random_deterministic():
    x = bipartite_random(6, 9, "2/5", 11)
    y = bipartite_random(6, 9, "2/5", 11)
    assert x.graph == y.graph
    x.check_invariants()


def test_genspec_and_generate():
    spec = GenSpec("disjoint_cliques", 16, Fraction(4))
    assert generate(spec).edge_count == 24
    assert generate(GenSpec("complete_bipartite", 6, Fraction(3))).edge_count == 9
    with pytest.raises(ValueError):
        GenSpec("uniform_random", 5, Fraction(3, 2))


class TestEdgeList:
    def test_round_trip_k5(self, tmp_path):
        g = complete_graph(5)
        p = tmp_path / "k5.el"
        write_edge_list(g, p)
        assert read_edge_list(p) == g
        text = p.read_text()
        assert text.splitlines()[0] == "5 10"
        assert format_edge_list(5, list(read_edge_list(p).edges())) == text

    def test_comments_and_unsorted(self):
        g = parse_edge_list("# hello\n3 2\n# mid\n2 1\n\n1 0\n")
        assert sorted(g.edges()) == [(0, 1), (1, 2)]

    def test_header_mismatch_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            g = parse_edge_list("3 5\n0 1\n1 2\n")
        assert g.edge_count == 2
        assert "declares 5" in caplog.text

    def test_bad_line_reports_location(self):
        with pytest.raises(GraphValidationError, match="g.el: line 3"):
            parse_edge_list("3 1\n0 1\n1 1\n", "g.el")
        with pytest.raises(GraphValidationError, match="missing"):
            parse_edge_list("# nothing\n")

    def test_original_ids(self, tmp_path):
        from cycleweave.graph import induced_subgraph

        sub = induced_subgraph(complete_graph(6), [1, 4, 5])
        p = tmp_path / "sub.el"
        write_edge_list(sub, p, original_ids=True)
        assert p.read_text().splitlines() == ["6 3", "1 4", "1 5", "4 5"]

    def test_metadata_sidecar(self, tmp_path):
        side = write_metadata(tmp_path / "g.el", {"family": "x", "seed": 1})
        assert side.name == "g.el.meta.json"
        assert json.loads(side.read_text()) == {"family": "x", "seed": 1}
