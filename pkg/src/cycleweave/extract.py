"""Dense-graph to cycle-connected bipartite subgraph extraction.

Stages: degree peeling, local max-cut bipartition, the codegree graph on
side A, pivot choice by exhaustive (or seeded sampled) minimisation of bad
pairs, then pruning of both sides around the pivot.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .graph import BipartiteGraph, Graph, VertexSet, bipartite_view, induced_subgraph
from .thresholds import (
    ExtractConfig,
    InvalidThresholds,
    ThresholdSet,
    at_least_bound,
    at_most_bound,
    encode,
    fewer_than_bound,
)


class ExtractionError(Exception):
    """Base class for pipeline precondition failures."""


class EmptyAfterPeel(ExtractionError):
    pass


class NotEnoughEdges(ExtractionError):
    pass


class PaperModePreconditionViolated(ExtractionError):
    pass


# -- stage 1: peeling ---------------------------------------------------------


def peel_to_min_degree(g: Graph, t: Fraction | int) -> Graph:
    """Largest induced subgraph with minimum degree ``>= t``.

    Vertices of degree below ``t`` are removed one at a time, smallest id
    first among the currently violating ones.  The result may be empty.
    """
    if t < 0:
        raise InvalidThresholds(f"peel threshold must be >= 0, got {t}")
    need = at_least_bound(Fraction(t))
    deg = [len(nb) for nb in g.adjacency]
    alive = [True] * g.vertex_count
    heap = [v for v in range(g.vertex_count) if deg[v] < need]
    heapq.heapify(heap)
    while heap:
        v = heapq.heappop(heap)
        if not alive[v]:
            continue
        alive[v] = False
        for u in g.adjacency[v]:
            if alive[u]:
                deg[u] -= 1
                if deg[u] == need - 1:
                    heapq.heappush(heap, u)
    return induced_subgraph(g, [v for v in range(g.vertex_count) if alive[v]])


# -- stage 2: bipartition -----------------------------------------------------


def local_bipartition(g: Graph) -> BipartiteGraph:
    """Single-vertex-switch local search for a large cut.

    Starts from the split by id parity and repeatedly moves the smallest-id
    vertex that has more neighbors on its own side than across.  At the
    fixed point each vertex keeps at least half its degree as cross edges.
    """
    if g.vertex_count == 0:
        raise ValueError("cannot bipartition an empty graph")
    side = [v % 2 for v in range(g.vertex_count)]
    same = [sum(1 for u in g.adjacency[v] if side[u] == side[v]) for v in range(g.vertex_count)]
    deg = [len(nb) for nb in g.adjacency]
    heap = [v for v in range(g.vertex_count) if 2 * same[v] > deg[v]]
    heapq.heapify(heap)
    while heap:
        v = heapq.heappop(heap)
        if 2 * same[v] <= deg[v]:
            continue  # stale entry
        old = side[v]
        side[v] = 1 - old
        same[v] = deg[v] - same[v]
        for u in g.adjacency[v]:
            if side[u] == old:
                same[u] -= 1
            else:
                same[u] += 1
                if 2 * same[u] > deg[u]:
                    heapq.heappush(heap, u)
    zero = [v for v in range(g.vertex_count) if side[v] == 0]
    one = [v for v in range(g.vertex_count) if side[v] == 1]
    return bipartite_view(g, zero, one)


# -- stage 3: auxiliary codegree graph ----------------------------------------


def codegree_matrix_a(h: BipartiteGraph) -> np.ndarray:
    m = h.biadjacency
    return m @ m.T


def build_gamma(h: BipartiteGraph, t_codeg: Fraction | int) -> Graph:
    """Graph on side A (vertex ``i`` is ``h.side_a[i]``) joining pairs of codegree ``>= t_codeg``."""
    c = codegree_matrix_a(h)
    adj = c >= at_least_bound(Fraction(t_codeg))
    np.fill_diagonal(adj, False)
    labels = tuple(h.graph.labels[a] for a in h.side_a)
    nbrs = tuple(frozenset(np.flatnonzero(row).tolist()) for row in adj)
    return Graph(vertex_count=len(h.side_a), adjacency=nbrs, labels=labels)


# -- stage 4: bad pairs and the pivot -----------------------------------------


def is_bad(w: int, u: int, v: int, h: BipartiteGraph, gamma: Graph, t_gamma_deg: Fraction | int) -> bool:
    """Whether ``w`` (side A) is a low-degree common neighbor of ``u, v`` (side B).

    Reference implementation straight from the definition; the counting
    routines below are vectorised and are checked against this one.
    """
    if u == v:
        raise ValueError("a bad pair needs two distinct vertices")
    common = h.graph.adjacency[u] & h.graph.adjacency[v]
    if w not in common:
        return False
    ai = h.a_index
    inside = {ai[z] for z in common}
    gdeg = sum(1 for z in gamma.adjacency[ai[w]] if z in inside)
    return gdeg <= t_gamma_deg


def bad_pair_matrix(
    w: int, h: BipartiteGraph, gamma: Graph, t_gamma_deg: Fraction | int
) -> tuple[VertexSet, np.ndarray]:
    """``N_H(w)`` and the symmetric boolean matrix of pairs of it that ``w`` is bad for.

    Only pairs inside ``N_H(w)`` can have ``w`` as a common neighbor.  For
    such a pair, the Gamma-degree of ``w`` inside ``N_H(u, v)`` is the number
    of Gamma-neighbors of ``w`` adjacent to both, i.e. an entry of ``X^T X``.
    """
    i = h.a_index[w]
    m = h.biadjacency
    cols = np.flatnonzero(m[i])
    rows = np.flatnonzero(gamma.adjacency_matrix[i])
    x = m[np.ix_(rows, cols)]
    bad = (x.T @ x) <= at_most_bound(Fraction(t_gamma_deg))
    np.fill_diagonal(bad, False)
    nbrs = tuple(h.side_b[c] for c in cols.tolist())
    return nbrs, bad


def count_bad_pairs(w: int, h: BipartiteGraph, gamma: Graph, t_gamma_deg: Fraction | int) -> int:
    _, bad = bad_pair_matrix(w, h, gamma, t_gamma_deg)
    return int(bad.sum()) // 2


@dataclass(frozen=True)
class PivotChoice:
    pivot: int
    bad_pairs: int
    average: Fraction
    evaluated: VertexSet
    counts: tuple[int, ...]


def select_pivot(h: BipartiteGraph, gamma: Graph, cfg: ExtractConfig) -> PivotChoice:
    """Derandomised pivot: minimise the bad-pair count over candidate vertices of A.

    The exhaustive strategy scores every vertex of A, so the returned count
    is at most the exact average.  The sampled strategy scores the distinct
    vertices hit by ``count`` uniform draws from a seeded PCG64 stream.
    """
    if not h.side_a:
        raise ValueError("side A is empty")
    strategy = cfg.pivot_strategy
    if strategy.kind == "exhaustive":
        candidates = h.side_a
    else:
        rng = np.random.Generator(np.random.PCG64(strategy.seed))
        idx = rng.integers(0, len(h.side_a), size=strategy.count)
        candidates = tuple(sorted({h.side_a[i] for i in idx.tolist()}))
    t = cfg.thresholds.t_gamma_deg
    counts = tuple(count_bad_pairs(w, h, gamma, t) for w in candidates)
    best = min(range(len(candidates)), key=lambda j: (counts[j], candidates[j]))
    return PivotChoice(
        pivot=candidates[best],
        bad_pairs=counts[best],
        average=Fraction(sum(counts), len(counts)),
        evaluated=candidates,
        counts=counts,
    )


# -- stage 5: pruning ---------------------------------------------------------


def prune_sides(
    h: BipartiteGraph,
    gamma: Graph,
    w: int,
    thresholds: ThresholdSet,
    *,
    keep_pivot: bool = True,
) -> tuple[VertexSet, VertexSet]:
    """Return ``(A', B')`` around pivot ``w``.

    ``A'`` is every vertex of A with at least ``t_codeg`` neighbors in
    ``N_H(w)``: the Gamma-neighbors of ``w``, plus ``w`` itself unless
    ``keep_pivot`` is off.  ``B'`` starts as ``N_H(w)``; the smallest-id
    vertex with at least ``t_bad_per_vertex`` bad partners among the
    survivors is deleted, counts are refreshed, and this repeats until no
    vertex qualifies.
    """
    i = h.a_index[w]
    a_prime = {h.side_a[j] for j in gamma.neighbors[i]}
    if keep_pivot and h.degree(w) >= at_least_bound(thresholds.t_codeg):
        a_prime.add(w)

    nbrs, bad = bad_pair_matrix(w, h, gamma, thresholds.t_gamma_deg)
    counts = bad.sum(axis=1)
    alive = np.ones(len(nbrs), dtype=bool)
    need = at_least_bound(thresholds.t_bad_per_vertex)
    while True:
        hits = np.flatnonzero(alive & (counts >= need))
        if hits.size == 0:
            break
        v = hits[0]
        alive[v] = False
        counts -= bad[:, v]
    b_prime = tuple(nbrs[j] for j in np.flatnonzero(alive).tolist())
    return tuple(sorted(a_prime)), b_prime


# -- pipeline -----------------------------------------------------------------


@dataclass
class PipelineTrace:
    g: Graph
    thresholds: ThresholdSet
    config: ExtractConfig
    g1: Graph
    h: BipartiteGraph
    gamma: Graph
    pivot: int
    pivot_bad_pairs: int
    bad_pair_avg: Fraction
    pivots_evaluated: int
    a_prime: VertexSet
    b_prime: VertexSet
    g_prime: BipartiteGraph
    timings_ms: dict[str, float] = field(default_factory=dict)

    def original(self, vs: VertexSet) -> list[int]:
        """Map H-space vertex ids back to input ids."""
        lab = self.g1.labels
        return [lab[v] for v in vs]

    @property
    def stage_counts(self) -> dict[str, dict[str, int]]:
        return {
            "g": {"vertices": self.g.vertex_count, "edges": self.g.edge_count},
            "g1": {"vertices": self.g1.vertex_count, "edges": self.g1.edge_count},
            "h": {"side_a": len(self.h.side_a), "side_b": len(self.h.side_b), "edges": self.h.edge_count},
            "gamma": {"vertices": self.gamma.vertex_count, "edges": self.gamma.edge_count},
            "g_prime": {
                "side_a": len(self.g_prime.side_a),
                "side_b": len(self.g_prime.side_b),
                "edges": self.g_prime.edge_count,
            },
        }

    def to_dict(self, *, timings: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "config": self.config.to_dict() | {"thresholds": self.thresholds.to_dict()},
            "counts": self.stage_counts,
            "g1_vertices": list(self.g1.labels),
            "h_side_a": self.original(self.h.side_a),
            "h_side_b": self.original(self.h.side_b),
            "pivot": self.g1.labels[self.pivot],
            "pivot_bad_pairs": self.pivot_bad_pairs,
            "bad_pair_avg": encode(self.bad_pair_avg),
            "pivots_evaluated": self.pivots_evaluated,
            "a_prime": self.original(self.a_prime),
            "b_prime": self.original(self.b_prime),
            "pivot_neighborhood": self.original(self.h.neighbors(self.pivot)),
        }
        if timings:
            out["timings_ms"] = {k: round(v, 3) for k, v in self.timings_ms.items()}
        return out


def resolve_thresholds(g: Graph, thresholds: ThresholdSet) -> ThresholdSet:
    """Bind the thresholds to the input graph and check paper-mode preconditions."""
    ts = thresholds.with_n(g.vertex_count)
    ts.validate()
    if ts.mode == "paper":
        if not ts.paper_precondition_holds():
            raise PaperModePreconditionViolated(
                f"paper mode needs n > 2^20 k^5; got n={ts.n}, k={ts.k} (2^20 k^5 = {2**20 * ts.k**5})"
            )
        if g.edge_count < ts.min_edges():
            raise NotEnoughEdges(f"paper mode needs e(G) >= n^2/k = {ts.min_edges()}; got {g.edge_count}")
    return ts


def extract(g: Graph, cfg: ExtractConfig) -> tuple[BipartiteGraph, PipelineTrace]:
    ts = resolve_thresholds(g, cfg.thresholds)
    clock: dict[str, float] = {}

    t0 = time.perf_counter()
    g1 = peel_to_min_degree(g, ts.t_peel)
    clock["peel"] = (time.perf_counter() - t0) * 1e3
    if g1.vertex_count == 0:
        raise EmptyAfterPeel(f"no vertex survives peeling at minimum degree {ts.t_peel}")

    t0 = time.perf_counter()
    h = local_bipartition(g1)
    clock["bipartition"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    gamma = build_gamma(h, ts.t_codeg)
    clock["gamma"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    choice = select_pivot(h, gamma, cfg)
    clock["pivot"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    a_prime, b_prime = prune_sides(h, gamma, choice.pivot, ts, keep_pivot=cfg.keep_pivot)
    g_prime = h.induced(a_prime + b_prime)
    clock["prune"] = (time.perf_counter() - t0) * 1e3

    trace = PipelineTrace(
        g=g,
        thresholds=ts,
        config=cfg,
        g1=g1,
        h=h,
        gamma=gamma,
        pivot=choice.pivot,
        pivot_bad_pairs=choice.bad_pairs,
        bad_pair_avg=choice.average,
        pivots_evaluated=len(choice.evaluated),
        a_prime=a_prime,
        b_prime=b_prime,
        g_prime=g_prime,
        timings_ms=clock,
    )
    return g_prime, trace


def trace_from_dict(g: Graph, data: dict[str, Any], cfg: ExtractConfig) -> PipelineTrace:
    """Rebuild a trace from its serialized vertex sets and recompute derived graphs.

    Used to re-audit a stored run without trusting its recorded counts.
    """
    ts = resolve_thresholds(g, cfg.thresholds)
    g1 = induced_subgraph(g, data["g1_vertices"])
    loc = g1.local_id
    h = bipartite_view(g1, [loc(v) for v in data["h_side_a"]], [loc(v) for v in data["h_side_b"]])
    gamma = build_gamma(h, ts.t_codeg)
    pivot = loc(data["pivot"])
    a_prime = tuple(sorted(loc(v) for v in data["a_prime"]))
    b_prime = tuple(sorted(loc(v) for v in data["b_prime"]))
    bad = count_bad_pairs(pivot, h, gamma, ts.t_gamma_deg)
    avg = Fraction(data["bad_pair_avg"]["num"], data["bad_pair_avg"]["den"])
    return PipelineTrace(
        g=g,
        thresholds=ts,
        config=cfg,
        g1=g1,
        h=h,
        gamma=gamma,
        pivot=pivot,
        pivot_bad_pairs=bad,
        bad_pair_avg=avg,
        pivots_evaluated=int(data.get("pivots_evaluated", len(h.side_a))),
        a_prime=a_prime,
        b_prime=b_prime,
        g_prime=h.induced(a_prime + b_prime),
    )


# -- audit --------------------------------------------------------------------


@dataclass
class StageAuditReport:
    checks: dict[str, bool | None]
    values: dict[str, Any]

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.checks.values())

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "checks": dict(self.checks), "values": dict(self.values)}


def _bad_partner_counts(trace: PipelineTrace) -> dict[int, int]:
    """For each v in B', the number of u in B' such that the pivot is bad for {u, v}."""
    nbrs, bad = bad_pair_matrix(trace.pivot, trace.h, trace.gamma, trace.thresholds.t_gamma_deg)
    pos = {v: j for j, v in enumerate(nbrs)}
    idx = np.array([pos[v] for v in trace.b_prime], dtype=np.int64)
    if idx.size == 0:
        return {}
    sub = bad[np.ix_(idx, idx)]
    return dict(zip(trace.b_prime, sub.sum(axis=1).tolist()))


def low_codegree_partner_counts(gp: BipartiteGraph, t3: Fraction | int) -> np.ndarray:
    """Per vertex of B', how many other vertices of B' share fewer than ``t3`` A'-neighbors with it."""
    m = gp.biadjacency
    c = m.T @ m
    low = c <= fewer_than_bound(Fraction(t3))
    np.fill_diagonal(low, False)
    return low.sum(axis=1)


def audit_trace(trace: PipelineTrace, thresholds: ThresholdSet | None = None) -> StageAuditReport:
    """Re-check every stage guarantee of a finished extraction with exact arithmetic.

    Paper-mode comparisons for ``G'`` are evaluated only in paper mode; in
    custom mode those checks are ``None`` and only raw values are reported.
    """
    ts = thresholds if thresholds is not None else trace.thresholds
    g, g1, h, gp = trace.g, trace.g1, trace.h, trace.g_prime
    n = g.vertex_count
    checks: dict[str, bool | None] = {}
    values: dict[str, Any] = {}

    # (a) peeling
    min_deg_g1 = min((len(nb) for nb in g1.adjacency), default=0)
    checks["peel_min_degree"] = min_deg_g1 >= ts.t_peel
    checks["peel_edge_loss"] = g1.edge_count >= g.edge_count - n * ts.t_peel
    values["g1_min_degree"] = min_deg_g1
    values["g1_edges"] = g1.edge_count
    values["peel_edge_floor"] = encode(g.edge_count - n * ts.t_peel)

    # (b) bipartition
    half_deg_ok = all(2 * h.degree(v) >= len(g1.adjacency[v]) for v in range(g1.vertex_count))
    checks["bipartition_half_degree"] = half_deg_ok
    checks["bipartition_half_edges"] = 2 * h.edge_count >= g1.edge_count
    values["h_edges"] = h.edge_count

    # (c) deletions from N_H(w) are paid for by bad pairs
    deleted = h.degree(trace.pivot) - len(trace.b_prime)
    values["b_deleted"] = deleted
    checks["pruning_deletion_bound"] = deleted * ts.t_bad_per_vertex <= trace.pivot_bad_pairs
    checks["pivot_at_most_average"] = trace.pivot_bad_pairs <= trace.bad_pair_avg

    # (d) properties of G'
    a_deg = [gp.degree(a) for a in gp.side_a]
    min_a_deg = min(a_deg, default=0)
    partners = _bad_partner_counts(trace)
    max_bad = max(partners.values(), default=0)
    low = low_codegree_partner_counts(gp, ts.t3) if gp.side_b else np.zeros(0, dtype=np.int64)
    max_low = int(low.max()) if low.size else 0
    values.update(
        {
            "a_prime_size": len(trace.a_prime),
            "b_prime_size": len(trace.b_prime),
            "g_prime_edges": gp.edge_count,
            "g_prime_min_a_degree": min_a_deg,
            "b_prime_max_bad_partners": max_bad,
            "b_prime_max_low_codegree_partners": max_low,
        }
    )
    checks["pruning_fixed_point"] = max_bad < ts.t_bad_per_vertex
    checks["b_prime_nonempty"] = bool(trace.b_prime)
    if ts.mode == "paper":
        checks["g_prime_min_a_degree"] = min_a_deg >= ts.t1
        checks["g_prime_low_codegree_partners"] = max_low < ts.t2
        checks["g_prime_edges"] = gp.edge_count >= Fraction(n) ** 2 / (2**6 * ts.k**2)
    else:
        checks["g_prime_min_a_degree"] = None
        checks["g_prime_low_codegree_partners"] = None
        checks["g_prime_edges"] = None
    return StageAuditReport(checks=checks, values=values)
