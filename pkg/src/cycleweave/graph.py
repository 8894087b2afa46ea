"""Immutable simple graphs and two-sided (bipartite) views.

Vertices are dense 0-based integers.  Every graph also carries ``labels``,
the original vertex id of each local vertex, so that subgraphs produced by
later stages can always be reported against the input file.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

VertexSet = tuple[int, ...]


class GraphValidationError(ValueError):
    """Raised when an edge list or vertex set is malformed."""


def vertex_set(vs: Iterable[int]) -> VertexSet:
    return tuple(sorted(set(vs)))


@dataclass(frozen=True, eq=False)
class Graph:
    vertex_count: int
    adjacency: tuple[frozenset[int], ...]
    labels: tuple[int, ...]

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbor tuples, one per vertex."""
        return tuple(tuple(sorted(nb)) for nb in self.adjacency)

    @cached_property
    def _local_of(self) -> dict[int, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        """Dense boolean adjacency; only built for the small auxiliary graphs."""
        m = np.zeros((self.vertex_count, self.vertex_count), dtype=bool)
        for u, nb in enumerate(self.neighbors):
            m[u, list(nb)] = True
        return m

    def local_id(self, original: int) -> int:
        return self._local_of[original]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u, nb in enumerate(self.neighbors):
            for v in nb:
                if v > u:
                    yield (u, v)

    def original_edges(self) -> list[tuple[int, int]]:
        lab = self.labels
        return sorted(tuple(sorted((lab[u], lab[v]))) for u, v in self.edges())

    @cached_property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.adjacency) // 2

    def degree(self, v: int) -> int:
        _check_vertex(self, v)
        return len(self.adjacency[v])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.adjacency == other.adjacency
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.labels, self.edge_count))

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"

    def check_invariants(self) -> None:
        """Full scan for loops, asymmetry and out-of-range ids."""
        if len(self.adjacency) != self.vertex_count or len(self.labels) != self.vertex_count:
            raise GraphValidationError("adjacency/labels length does not match vertex_count")
        for u, nb in enumerate(self.adjacency):
            for v in nb:
                if v == u:
                    raise GraphValidationError(f"self-loop at {u}")
                if not 0 <= v < self.vertex_count:
                    raise GraphValidationError(f"neighbor {v} of {u} out of range")
                if u not in self.adjacency[v]:
                    raise GraphValidationError(f"asymmetric adjacency {u}->{v}")


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.vertex_count:
        raise GraphValidationError(f"vertex {v} out of range [0, {g.vertex_count})")


_NO_NEIGHBORS: frozenset[int] = frozenset()


def _build(n: int, adj: Sequence[Iterable[int]], labels: Sequence[int] | None = None) -> Graph:
    # isolated vertices share one empty set; keeps huge sparse inputs cheap
    return Graph(
        vertex_count=n,
        adjacency=tuple(frozenset(nb) if nb else _NO_NEIGHBORS for nb in adj),
        labels=tuple(range(n)) if labels is None else tuple(labels),
    )


def from_edge_list(n: int, pairs: Iterable[tuple[int, int]], *, lines: Sequence[int] | None = None) -> Graph:
    """Build a graph on ``n`` vertices from (possibly repeated) vertex pairs.

    ``lines`` optionally gives the source line number of each pair so that
    validation errors can point into the originating file.
    """
    if n < 0:
        raise GraphValidationError(f"negative vertex count {n}")
    adj: dict[int, set[int]] = {}
    for i, (u, v) in enumerate(pairs):
        where = f"line {lines[i]}" if lines is not None else f"pair #{i}"
        if u == v:
            raise GraphValidationError(f"{where}: self-loop ({u}, {v})")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphValidationError(f"{where}: vertex id out of range in ({u}, {v}) for n={n}")
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return _build(n, [adj.get(v, ()) for v in range(n)])


def degree(g: Graph, v: int) -> int:
    return g.degree(v)


def edge_count(g: Graph) -> int:
    return g.edge_count


def common_neighbors(g: Graph, u: int, v: int) -> VertexSet:
    """Sorted common neighborhood of two distinct vertices; its size is the codegree."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        raise GraphValidationError("common neighborhood needs two distinct vertices")
    return tuple(sorted(g.adjacency[u] & g.adjacency[v]))


def codegree(g: Graph, u: int, v: int) -> int:
    return len(common_neighbors(g, u, v))


def induced_subgraph(g: Graph, vs: Iterable[int]) -> Graph:
    """Subgraph induced by ``vs``, relabelled to ``0..len(vs)-1`` in ascending order.

    The result's ``labels`` compose with ``g.labels``, so ``sub.labels[i]`` is
    the original id of local vertex ``i`` and ``sub.local_id`` inverts it.
    """
    keep = vertex_set(vs)
    for v in keep:
        _check_vertex(g, v)
    new_of = {old: new for new, old in enumerate(keep)}
    adj = [[new_of[w] for w in g.adjacency[old] if w in new_of] for old in keep]
    return _build(len(keep), adj, [g.labels[old] for old in keep])


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """Cross edges between two disjoint vertex classes of ``graph``.

    ``graph`` holds only cross edges and shares the vertex space of the graph
    the view was taken from.  Vertices outside both sides are isolated.
    """

    graph: Graph
    side_a: VertexSet
    side_b: VertexSet

    @cached_property
    def a_index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.side_a)}

    @cached_property
    def b_index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.side_b)}

    @cached_property
    def biadjacency(self) -> np.ndarray:
        """``|A| x |B|`` 0/1 matrix in side order."""
        m = np.zeros((len(self.side_a), len(self.side_b)), dtype=np.int64)
        bi = self.b_index
        for i, a in enumerate(self.side_a):
            cols = [bi[b] for b in self.graph.adjacency[a]]
            m[i, cols] = 1
        return m

    @property
    def edge_count(self) -> int:
        return self.graph.edge_count

    def degree(self, v: int) -> int:
        return self.graph.degree(v)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.graph.neighbors[v]

    def has_edge(self, u: int, v: int) -> bool:
        return self.graph.has_edge(u, v)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(a, b)`` with ``a`` in side A, sorted."""
        return [(a, b) for a in self.side_a for b in self.graph.neighbors[a]]

    def induced(self, vs: Iterable[int]) -> "BipartiteGraph":
        """Sub-view induced by ``vs``; side membership is preserved, never swapped."""
        keep = vertex_set(vs)
        sub = induced_subgraph(self.graph, keep)
        new_of = {old: new for new, old in enumerate(keep)}
        a = set(self.side_a)
        return BipartiteGraph(
            graph=sub,
            side_a=tuple(new_of[v] for v in keep if v in a),
            side_b=tuple(new_of[v] for v in keep if v not in a),
        )

    def check_invariants(self) -> None:
        self.graph.check_invariants()
        a, b = set(self.side_a), set(self.side_b)
        if a & b:
            raise GraphValidationError("sides overlap")
        for u, v in self.graph.edges():
            if not ((u in a and v in b) or (u in b and v in a)):
                raise GraphValidationError(f"edge ({u}, {v}) is not a cross edge")

    def __repr__(self) -> str:
        return f"BipartiteGraph(|A|={len(self.side_a)}, |B|={len(self.side_b)}, m={self.edge_count})"


def bipartite_view(g: Graph, side_a: Iterable[int], side_b: Iterable[int]) -> BipartiteGraph:
    """Keep only the edges of ``g`` between the two sides.

    Sides are swapped if needed so that ``|side_b| <= |side_a|``; ties keep
    the given order.
    """
    a, b = vertex_set(side_a), vertex_set(side_b)
    for v in a + b:
        _check_vertex(g, v)
    if set(a) & set(b):
        raise GraphValidationError("sides overlap")
    if len(b) > len(a):
        a, b = b, a
    sa, sb = set(a), set(b)
    adj: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for u in a:
        for v in g.adjacency[u]:
            if v in sb:
                adj[u].append(v)
                adj[v].append(u)
    return BipartiteGraph(graph=_build(g.vertex_count, adj, g.labels), side_a=a, side_b=b)
