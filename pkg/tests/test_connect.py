from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from cycleweave.connect import (
    CycleWitness,
    EdgePair,
    SelectionExhausted,
    bipartite_edge_pairs,
    build_witness,
    check_certificate,
    count_paths_len3,
    cycle_through_edges,
    enumerate_paths_len3,
    path3_count_matrix,
    sample_edge_pairs,
    validate_witness,
    verify_path3_bound,
    verify_strong_c8,
)
from cycleweave.gen import bipartite_random, complete_bipartite
from cycleweave.graph import BipartiteGraph, from_edge_list

from conftest import brute_force_cycles, complete_graph, cycle_edges, cycle_graph, path_graph, small_bipartite, small_graphs


def oracle_has_cycle(g, e, f, max_len, even=False):
    want = {frozenset(e), frozenset(f)}
    return any(
        want <= cycle_edges(c) and (not even or len(c) % 2 == 0) for c in brute_force_cycles(g, max_len)
    )


# -- exhaustive search --------------------------------------------------------


def test_c6_opposite_edges():
    c6 = cycle_graph(6)
    w = cycle_through_edges(c6, (0, 1), (3, 4), 6)
    assert w is not None and w.length == 6
    assert validate_witness(c6, w) == []
    assert cycle_through_edges(c6, (0, 1), (3, 4), 5) is None


def test_triangle_adjacent_edges():
    w = cycle_through_edges(complete_graph(3), (0, 1), (1, 2), 3)
    assert w is not None and w.length == 3
    assert cycle_through_edges(complete_graph(3), (0, 1), (1, 2), 6, even=True) is None


def test_path_has_no_cycle():
    assert cycle_through_edges(path_graph(4), (0, 1), (2, 3), 8) is None


def test_non_edge_rejected():
    with pytest.raises(ValueError):
        cycle_through_edges(path_graph(4), (0, 2), (2, 3), 8)


def test_k33_every_pair():
    k = complete_bipartite(3, 3).graph
    for e, f in combinations(list(k.edges()), 2):
        shares = bool(set(e) & set(f))
        w = cycle_through_edges(k, e, f, 4 if shares else 6, even=True)
        assert w is not None
        assert validate_witness(k, w, 6) == []


@settings(max_examples=150, deadline=None)
@given(small_graphs(max_n=7, min_n=3), st.integers(3, 8), st.booleans(), st.data())
def test_search_matches_brute_force(g, max_len, even, data):
    edges = list(g.edges())
    if len(edges) < 2:
        return
    e, f = data.draw(st.sampled_from(list(combinations(edges, 2))))
    w = cycle_through_edges(g, e, f, max_len, even=even)
    assert (w is not None) == oracle_has_cycle(g, e, f, max_len, even)
    if w is not None:
        assert validate_witness(g, w, max_len) == []
        assert not even or w.length % 2 == 0
        # symmetric and monotone in the length bound
        assert cycle_through_edges(g, f, e, max_len, even=even) is not None
        assert cycle_through_edges(g, e, f, max_len + 1, even=even) is not None


def test_validate_witness_reports_problems():
    k = complete_bipartite(2, 2).graph
    pair = EdgePair.of((0, 2), (1, 3))
    assert validate_witness(k, CycleWitness(pair, (0, 2, 1, 3))) == []
    bad = validate_witness(k, CycleWitness(pair, (0, 1, 2, 3)))
    assert any("not an edge" in p for p in bad)
    assert any("repeated" in p for p in validate_witness(k, CycleWitness(pair, (0, 2, 0, 3))))


def test_edge_pair_relations():
    assert EdgePair.of((0, 5), (0, 6)).relation == "share_a"
    assert EdgePair.of((0, 5), (1, 5)).relation == "share_b"
    assert EdgePair.of((0, 5), (1, 6)).relation == "disjoint"
    with pytest.raises(ValueError):
        EdgePair.of((0, 5), (5, 0))


# -- whole-graph verification -------------------------------------------------


def test_verify_k33():
    r = verify_strong_c8(complete_bipartite(3, 3).graph)
    assert r.strongly_c8 and r.exact and r.pairs_checked == 36


def test_verify_path_fails():
    r = verify_strong_c8(path_graph(4))
    assert not r.strongly_c8
    assert len(r.failures) == 3


def test_verify_two_disjoint_c4():
    g = from_edge_list(8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)])
    r = verify_strong_c8(g)
    assert not r.strongly_c8
    assert len(r.failures) == 16  # every cross pair


def test_verify_odd_cycles_need_any_parity():
    # C5: pairs lie on the 5-cycle only
    assert not verify_strong_c8(cycle_graph(5)).strongly_c8
    assert verify_strong_c8(cycle_graph(5), even=False).strongly_c8


def test_verify_witness_map():
    r = verify_strong_c8(complete_bipartite(3, 3).graph, keep_witnesses=True)
    assert len(r.witness_map) == 36
    d = r.to_dict()
    assert len(d["witnesses"]) == 36 and d["failures"] == []


def test_sampled_verify_deterministic():
    g = bipartite_random(8, 8, "1/2", 3).graph
    r1 = verify_strong_c8(g, ("sample", 50, 7))
    r2 = verify_strong_c8(g, ("sample", 50, 7))
    assert r1.to_dict() == r2.to_dict()
    assert not r1.exact and r1.pairs_checked <= 50
    assert sample_edge_pairs(1, 10, 0) == []


def test_verify_workers_match_serial():
    g = complete_bipartite(10, 10).graph  # 4950 pairs, enough for two chunks
    serial = verify_strong_c8(g, workers=1)
    parallel = verify_strong_c8(g, workers=2)
    assert serial.to_dict() == parallel.to_dict()
    assert serial.strongly_c8


# -- certificate and witnesses ------------------------------------------------


def test_certificate_k55():
    k = complete_bipartite(5, 5)
    rep = check_certificate(k, 5, 1, 5)
    assert rep.holds, rep.failure_reasons
    assert rep.measured_min_a_degree == 5 and rep.measured_max_bad_partners == 0


def test_certificate_k55_t3_too_high():
    rep = check_certificate(complete_bipartite(5, 5), 5, 1, 6)
    assert not rep.holds
    assert any(r.startswith("C2") for r in rep.failure_reasons)


def test_certificate_slack_and_empty_b():
    rep = check_certificate(complete_bipartite(5, 5), 4, 1, 5)
    assert any("t1 - t2" in r for r in rep.failure_reasons)
    g = from_edge_list(2, [])
    empty = BipartiteGraph(graph=g, side_a=(0, 1), side_b=())
    rep = check_certificate(empty, 0, 1, 5)
    assert any(r.startswith("C4") for r in rep.failure_reasons)


@pytest.mark.parametrize("a, b", [(5, 5), (6, 5), (5, 7)])
def test_build_witness_all_relations(a, b):
    k = complete_bipartite(a, b)
    assert check_certificate(k, b, 1, 5).holds
    seen = set()
    for pair in bipartite_edge_pairs(k):
        w = build_witness(k, pair, 1, 5)
        assert validate_witness(k.graph, w) == []
        assert w.length == (8 if pair.relation == "disjoint" else 6)
        seen.add(pair.relation)
    assert seen == {"disjoint", "share_a", "share_b"}


def test_build_witness_smallest_ids():
    k = complete_bipartite(5, 5)
    w = build_witness(k, EdgePair.of((0, 5), (1, 6)), 1, 5)
    assert w.cycle == (0, 7, 2, 6, 1, 8, 3, 5)


def test_build_witness_without_certificate():
    g = from_edge_list(4, [(0, 2), (1, 3)])
    h = BipartiteGraph(graph=g, side_a=(0, 1), side_b=(2, 3))
    with pytest.raises(SelectionExhausted):
        build_witness(h, EdgePair.of((0, 2), (1, 3)), 1, 5)


# -- paths of length three ----------------------------------------------------


@pytest.mark.parametrize("a, b, expected", [(1, 1, 0), (2, 2, 1), (3, 3, 4), (5, 5, 16)])
def test_path3_complete_bipartite(a, b, expected):
    k = complete_bipartite(a, b)
    assert count_paths_len3(k, 0, a) == expected


def test_path3_rejects_wrong_side():
    k = complete_bipartite(2, 2)
    with pytest.raises(ValueError):
        count_paths_len3(k, 2, 0)


@given(small_bipartite())
def test_path3_three_ways_agree(h):
    mat = path3_count_matrix(h)
    for i, a in enumerate(h.side_a):
        for j, b in enumerate(h.side_b):
            c = count_paths_len3(h, a, b)
            assert c == len(list(enumerate_paths_len3(h, a, b))) == int(mat[i, j])


def test_path3_bound_k55():
    rep = verify_path3_bound(complete_bipartite(5, 5), 1, 5)
    assert rep.ok and rep.min_count == 16 and rep.min_slack == 4
    rep = verify_path3_bound(complete_bipartite(5, 5), 1, 5, n=10**9, k=Fraction(2))
    assert rep.asymptotic_bound == Fraction(10**18, 2**31)


def test_path3_bound_violation_reported():
    g = from_edge_list(4, [(0, 2), (0, 3), (1, 3)])
    h = BipartiteGraph(graph=g, side_a=(0, 1), side_b=(2, 3))
    rep = verify_path3_bound(h, 0, 5)  # deg(0) = 2 -> bound 4, no paths from 0 to 2
    assert not rep.ok
    assert (0, 2, 0, Fraction(4)) in rep.violations
