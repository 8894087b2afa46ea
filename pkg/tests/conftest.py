from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import strategies as st

from cycleweave.graph import BipartiteGraph, Graph, from_edge_list


def cycle_graph(n: int) -> Graph:
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return from_edge_list(n, combinations(range(n), 2))


def star(leaves: int) -> Graph:
    return from_edge_list(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def brute_force_cycles(g: Graph, max_len: int) -> list[tuple[int, ...]]:
    """Every simple cycle of length <= max_len, each listed once (smallest vertex first).

    Deliberately naive: extends paths from the smallest vertex, no pruning.
    """
    found = []
    for start in range(g.vertex_count):
        stack = [(start, (start,))]
        while stack:
            x, path = stack.pop()
            for y in g.adjacency[x]:
                if y == start and len(path) >= 3 and path[1] < path[-1]:
                    found.append(path)
                elif y > start and y not in path and len(path) < max_len:
                    stack.append((y, path + (y,)))
    return found


def cycle_edges(cyc: tuple[int, ...]) -> set[frozenset[int]]:
    return {frozenset((cyc[i], cyc[(i + 1) % len(cyc)])) for i in range(len(cyc))}


@st.composite
def small_graphs(draw, max_n: int = 8, min_n: int = 2):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return from_edge_list(n, chosen)


@st.composite
def small_bipartite(draw, max_side: int = 7):
    from cycleweave.gen import bipartite_random

    a = draw(st.integers(1, max_side))
    b = draw(st.integers(1, max_side))
    num = draw(st.integers(0, 10))
    seed = draw(st.integers(0, 2**32))
    return bipartite_random(a, b, f"{num}/10", seed)


@pytest.fixture
def triangle() -> Graph:
    return complete_graph(3)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(RESULTS, key=lambda r: int(r[0].split()[0])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}")
