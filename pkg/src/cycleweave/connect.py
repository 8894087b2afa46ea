"""Cycle-connectivity checks.

Two independent routes decide whether pairs of edges lie on short common
cycles: ``cycle_through_edges`` is an exhaustive bounded search that works
on any graph, while ``build_witness`` assembles the cycle directly from the
degree/codegree certificate of a bipartite graph.  They share no code.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterator, Literal, Sequence

import numpy as np

from .graph import BipartiteGraph, Graph
from .thresholds import at_least_bound, encode, fewer_than_bound

Edge = tuple[int, int]
Relation = Literal["disjoint", "share_a", "share_b"]

THREADS_ENV = "CYCLEWEAVE_THREADS"


class SelectionExhausted(RuntimeError):
    """A witness choice point had no candidates; the certificate must have been wrong."""


@dataclass(frozen=True)
class EdgePair:
    e: Edge
    f: Edge
    relation: Relation

    @classmethod
    def of(cls, e: Edge, f: Edge) -> "EdgePair":
        """Classify a pair of edges.  For bipartite pairs pass ``(a, b)`` orientation."""
        if e == f or e == f[::-1]:
            raise ValueError("an edge pair needs two distinct edges")
        if e[0] == f[0]:
            rel: Relation = "share_a"
        elif e[1] == f[1]:
            rel = "share_b"
        elif set(e) & set(f):
            rel = "share_a"  # unoriented edges meeting crosswise
        else:
            rel = "disjoint"
        return cls(e, f, rel)

    @property
    def shares_vertex(self) -> bool:
        return self.relation != "disjoint"

    def relabel(self, labels: Sequence[int]) -> "EdgePair":
        return EdgePair(
            (labels[self.e[0]], labels[self.e[1]]), (labels[self.f[0]], labels[self.f[1]]), self.relation
        )

    def to_list(self) -> list[list[int]]:
        return [list(self.e), list(self.f)]


@dataclass(frozen=True)
class CycleWitness:
    pair: EdgePair
    cycle: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.cycle)

    def relabel(self, labels: Sequence[int]) -> "CycleWitness":
        return CycleWitness(self.pair.relabel(labels), tuple(labels[v] for v in self.cycle))


def validate_witness(g: Graph, w: CycleWitness, max_len: int | None = None) -> list[str]:
    """Structural check of a witness; returns the list of problems (empty when valid).

    Default length limits: 8 for disjoint pairs, 6 for pairs sharing a vertex.
    """
    problems = []
    cyc = w.cycle
    if len(cyc) < 3:
        problems.append("cycle shorter than 3")
    if len(set(cyc)) != len(cyc):
        problems.append("repeated vertex")
    steps = {frozenset((cyc[i], cyc[(i + 1) % len(cyc)])) for i in range(len(cyc))}
    for i in range(len(cyc)):
        u, v = cyc[i], cyc[(i + 1) % len(cyc)]
        if not g.has_edge(u, v):
            problems.append(f"({u}, {v}) is not an edge")
    for edge in (w.pair.e, w.pair.f):
        if frozenset(edge) not in steps:
            problems.append(f"edge {edge} not on the cycle")
    limit = max_len if max_len is not None else (6 if w.pair.shares_vertex else 8)
    if len(cyc) > limit:
        problems.append(f"length {len(cyc)} exceeds {limit}")
    return problems


# -- exhaustive bounded search ------------------------------------------------


def _bfs_dist(g: Graph, src: int, blocked: set[int], limit: int) -> dict[int, int]:
    dist = {src: 0}
    queue = deque([src])
    adj = g.adjacency
    while queue:
        x = queue.popleft()
        d = dist[x]
        if d == limit:
            continue
        for y in adj[x]:
            if y not in dist and y not in blocked:
                dist[y] = d + 1
                queue.append(y)
    return dist


def _simple_paths(
    g: Graph, s: int, t: int, length: int, blocked: set[int], dist_t: dict[int, int] | None = None
) -> Iterator[list[int]]:
    """All simple s-t paths with exactly ``length`` edges avoiding ``blocked``, in id order.

    ``dist_t`` (BFS distances to ``t`` avoiding ``blocked`` and ``s``) prunes
    branches that cannot reach ``t`` in time; it is computed when omitted.
    """
    adj = g.adjacency
    if length == 1:
        if t in adj[s]:
            yield [s, t]
        return
    if length == 2:
        for y in sorted(adj[s] & adj[t]):
            if y not in blocked:
                yield [s, y, t]
        return
    if dist_t is None:
        dist_t = _bfs_dist(g, t, blocked | {s}, length)
    path = [s]
    on_path = {s}
    nb = g.neighbors

    def extend(x: int, left: int) -> Iterator[list[int]]:
        if left == 1:
            if t in adj[x]:
                yield path + [t]
            return
        for y in nb[x]:
            if y == t or y in on_path or y in blocked:
                continue
            d = dist_t.get(y)
            if d is None or d > left - 1:
                continue
            path.append(y)
            on_path.add(y)
            yield from extend(y, left - 1)
            path.pop()
            on_path.discard(y)

    yield from extend(s, length)


def _second_path(g: Graph, s: int, t: int, budget: int, blocked: set[int], parity: int | None) -> list[int] | None:
    """Shortest admissible s-t path of at most ``budget`` edges; ``parity`` fixes length mod 2."""
    dist_t = None
    for length in range(1, budget + 1):
        if parity is not None and length % 2 != parity:
            continue
        if length >= 3 and dist_t is None:
            dist_t = _bfs_dist(g, t, blocked | {s}, budget)
            if not any(x in dist_t for x in g.adjacency[s]):
                return None
        for p in _simple_paths(g, s, t, length, blocked, dist_t):
            return p
    return None


def _check_edge(g: Graph, e: Edge) -> None:
    u, v = e
    if not (0 <= u < g.vertex_count and 0 <= v < g.vertex_count) or not g.has_edge(u, v):
        raise ValueError(f"{e} is not an edge of the graph")


def cycle_through_edges(g: Graph, e: Edge, f: Edge, max_len: int, *, even: bool = False) -> CycleWitness | None:
    """Find a simple cycle with at most ``max_len`` edges through both ``e`` and ``f``.

    Exhaustive: every split of the cycle into the two given edges and two
    connecting paths is considered, shortest first path first, so ``None``
    means no such cycle exists.  With ``even`` only even cycles count.
    """
    _check_edge(g, e)
    _check_edge(g, f)
    if max_len < 3:
        raise ValueError("max_len must be >= 3")
    pair = EdgePair.of(e, f)
    shared = set(e) & set(f)
    if shared:
        (v,) = shared
        x = e[0] if e[1] == v else e[1]
        y = f[0] if f[1] == v else f[1]
        # cycle v, x, ..., y with a single x-y path avoiding v
        parity = 0 if even else None
        p = _second_path(g, x, y, max_len - 2, {v}, parity)
        if p is None:
            return None
        return CycleWitness(pair, (v, *p))

    x1, y1 = e
    x2, y2 = f
    ends = {x1, y1, x2, y2}
    budget = max_len - 2
    # cycle x1, y1 ~> s2, t2 ~> x1, trying both orientations of f
    for l1 in range(1, budget):
        for s2, t2 in ((x2, y2), (y2, x2)):
            for p1 in _simple_paths(g, y1, s2, l1, {x1, t2}):
                used = (set(p1) | ends) - {t2, x1}
                p2 = _second_path(g, t2, x1, budget - l1, used, l1 % 2 if even else None)
                if p2 is not None:
                    return CycleWitness(pair, (x1, *p1, *p2[:-1]))
    return None


# -- whole-graph verification -------------------------------------------------


@dataclass
class ConnectivityReport:
    strongly_c8: bool
    pairs_checked: int
    total_pairs: int
    exact: bool
    max_cycle: int
    failures: list[EdgePair]
    witness_map: dict[EdgePair, CycleWitness] | None = None

    def to_dict(self, labels: Sequence[int] | None = None) -> dict[str, Any]:
        relabel = (lambda p: p.relabel(labels)) if labels is not None else (lambda p: p)
        out: dict[str, Any] = {
            "strongly_c8": self.strongly_c8,
            "pairs_checked": self.pairs_checked,
            "total_pairs": self.total_pairs,
            "exact": self.exact,
            "max_cycle": self.max_cycle,
            "failures": [relabel(p).to_list() for p in self.failures],
        }
        if self.witness_map is not None:
            out["witnesses"] = [
                {"pair": relabel(p).to_list(), "cycle": list(w.relabel(labels).cycle if labels else w.cycle)}
                for p, w in sorted(self.witness_map.items(), key=lambda kv: (kv[0].e, kv[0].f))
            ]
        return out


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def sample_edge_pairs(m: int, count: int, seed: int) -> list[tuple[int, int]]:
    """Distinct unordered index pairs from ``count`` uniform draws of a seeded PCG64 stream."""
    if m < 2:
        return []
    rng = np.random.Generator(np.random.PCG64(seed))
    i = rng.integers(0, m, size=count)
    j = rng.integers(0, m - 1, size=count)
    j = j + (j >= i)
    return sorted({(min(a, b), max(a, b)) for a, b in zip(i.tolist(), j.tolist())})


def _check_pairs(args: tuple[Graph, list[tuple[Edge, Edge]], int, bool, bool]):
    g, pairs, max_len, even, keep = args
    fails, wits = [], []
    for e, f in pairs:
        shares = bool(set(e) & set(f))
        w = cycle_through_edges(g, e, f, max_len - 2 if shares else max_len, even=even)
        if w is None:
            fails.append(EdgePair.of(e, f))
        elif keep:
            wits.append(w)
    return fails, wits


def verify_strong_c8(
    g: Graph,
    pairs: str | tuple[str, int, int] = "all",
    *,
    max_cycle: int = 8,
    even: bool = True,
    keep_witnesses: bool = False,
    workers: int | None = None,
) -> ConnectivityReport:
    """Check every (or a seeded sample of) pair of edges for a short common cycle.

    Disjoint pairs need a cycle of length ``<= max_cycle``; pairs sharing a
    vertex need ``<= max_cycle - 2``.  ``pairs`` is ``"all"`` or
    ``("sample", count, seed)``.  Worker processes are capped by the
    ``CYCLEWEAVE_THREADS`` environment variable unless ``workers`` is given.
    """
    edges = list(g.edges())
    m = len(edges)
    total = m * (m - 1) // 2
    if pairs == "all":
        idx: list[tuple[int, int]] | Iterator[tuple[int, int]] = combinations(range(m), 2)
        exact = True
    else:
        _, count, seed = pairs
        idx = sample_edge_pairs(m, count, seed)
        exact = False
    todo = [(edges[i], edges[j]) for i, j in idx]

    n_workers = min(_worker_count(workers), max(1, len(todo) // 2000))
    if n_workers <= 1:
        results = [_check_pairs((g, todo, max_cycle, even, keep_witnesses))]
    else:
        chunk = -(-len(todo) // n_workers)
        jobs = [(g, todo[i : i + chunk], max_cycle, even, keep_witnesses) for i in range(0, len(todo), chunk)]
        with ProcessPoolExecutor(max_workers=n_workers) as ex:
            results = list(ex.map(_check_pairs, jobs))

    failures = sorted((p for fs, _ in results for p in fs), key=lambda p: (p.e, p.f))
    wmap = {w.pair: w for _, ws in results for w in ws} if keep_witnesses else None
    return ConnectivityReport(
        strongly_c8=not failures,
        pairs_checked=len(todo),
        total_pairs=total,
        exact=exact or len(todo) == total,
        max_cycle=max_cycle,
        failures=failures,
        witness_map=wmap,
    )


# -- certificate --------------------------------------------------------------


@dataclass
class CertificateReport:
    holds: bool
    t1: Fraction
    t2: Fraction
    t3: Fraction
    measured_min_a_degree: int
    measured_max_bad_partners: int
    measured_b_size: int
    failure_reasons: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "holds": self.holds,
            "t1": encode(self.t1),
            "t2": encode(self.t2),
            "t3": encode(self.t3),
            "measured_min_a_degree": self.measured_min_a_degree,
            "measured_max_bad_partners": self.measured_max_bad_partners,
            "measured_b_size": self.measured_b_size,
            "failure_reasons": list(self.failure_reasons),
        }


def _codegree_b(gp: BipartiteGraph) -> np.ndarray:
    m = gp.biadjacency
    return m.T @ m


def check_certificate(gp: BipartiteGraph, t1: Fraction | int, t2: Fraction | int, t3: Fraction | int) -> CertificateReport:
    """Sufficient conditions for strong C8-connectivity of a bipartite graph.

    C1: every a in A' has degree >= t1.
    C2: every v in B' has fewer than t2 partners u in B' with fewer than t3
        common neighbors.
    C3: t3 >= 5 and t1 - t2 >= 4, the slack the cycle constructions spend on
        avoiding already used vertices.
    C4: |B'| >= t2.
    """
    t1, t2, t3 = Fraction(t1), Fraction(t2), Fraction(t3)
    reasons = []
    a_deg = [gp.degree(a) for a in gp.side_a]
    min_a = min(a_deg, default=0)
    if gp.side_a and min_a < t1:
        reasons.append(f"C1: min degree in A' is {min_a} < t1 = {t1}")

    if gp.side_b:
        low = _codegree_b(gp) <= fewer_than_bound(t3)
        np.fill_diagonal(low, False)
        max_bad = int(low.sum(axis=1).max())
    else:
        max_bad = 0
    if not max_bad < t2:
        reasons.append(f"C2: some vertex of B' has {max_bad} low-codegree partners, not < t2 = {t2}")
    if t3 < 5:
        reasons.append(f"C3: t3 = {t3} < 5")
    if t1 - t2 < 4:
        reasons.append(f"C3: t1 - t2 = {t1 - t2} < 4")
    if len(gp.side_b) < t2:
        reasons.append(f"C4: |B'| = {len(gp.side_b)} < t2 = {t2}")
    return CertificateReport(
        holds=not reasons,
        t1=t1,
        t2=t2,
        t3=t3,
        measured_min_a_degree=min_a,
        measured_max_bad_partners=max_bad,
        measured_b_size=len(gp.side_b),
        failure_reasons=reasons,
    )


# -- constructive witnesses ---------------------------------------------------


def _pick(candidates, what: str) -> int:
    for c in candidates:
        return c
    raise SelectionExhausted(f"no candidate for {what}")


def build_witness(gp: BipartiteGraph, pair: EdgePair, t2: Fraction | int, t3: Fraction | int) -> CycleWitness:
    """Assemble the 8-cycle (disjoint pair) or 6-cycle (shared endpoint) directly.

    Edges are ``(a, b)`` with ``a`` in A'.  At every choice point the
    smallest admissible vertex id is taken.  Needs a passing certificate;
    otherwise ``SelectionExhausted`` may be raised.
    """
    adj = gp.graph.adjacency
    nb = gp.graph.neighbors
    need = at_least_bound(Fraction(t3))

    def common(u: int, v: int) -> frozenset[int]:
        return adj[u] & adj[v]

    (a, b), (a2_, b2_) = pair.e, pair.f
    for x, y in (pair.e, pair.f):
        if not gp.has_edge(x, y) or x not in gp.a_index:
            raise ValueError(f"{(x, y)} is not an (A', B') edge")

    if pair.relation == "disjoint":
        ap, bp = a2_, b2_
        b1 = _pick((c for c in nb[a] if c not in (b, bp) and len(common(c, bp)) >= need), "b1")
        a1 = _pick((z for z in sorted(common(bp, b1)) if z not in (a, ap)), "a1")
        b2 = _pick((c for c in nb[ap] if c not in (b, bp, b1) and len(common(c, b)) >= need), "b2")
        a2 = _pick((z for z in sorted(common(b, b2)) if z not in (a, ap, a1)), "a2")
        cycle = (a, b1, a1, bp, ap, b2, a2, b)
    elif pair.relation == "share_a":
        bp = b2_
        a1 = _pick((z for z in nb[b] if z != a), "a1")
        b1 = _pick((c for c in nb[a1] if c not in (b, bp) and len(common(c, bp)) >= need), "b1")
        a2 = _pick((z for z in sorted(common(bp, b1)) if z not in (a, a1)), "a2")
        cycle = (a, b, a1, b1, a2, bp)
    else:
        ap = a2_
        b1 = _pick((c for c in nb[a] if c != b), "b1")
        b2 = _pick((c for c in nb[ap] if c not in (b, b1) and len(common(c, b1)) >= need), "b2")
        a2 = _pick((z for z in sorted(common(b1, b2)) if z not in (a, ap)), "a2")
        cycle = (a, b, ap, b2, a2, b1)
    return CycleWitness(pair, cycle)


def bipartite_edge_pairs(gp: BipartiteGraph) -> Iterator[EdgePair]:
    for e, f in combinations(gp.edges(), 2):
        yield EdgePair.of(e, f)


# -- paths of length three ----------------------------------------------------


def _check_sides(gp: BipartiteGraph, a: int, b: int) -> None:
    if a not in gp.a_index:
        raise ValueError(f"{a} is not in side A")
    if b not in gp.b_index:
        raise ValueError(f"{b} is not in side B")


def count_paths_len3(gp: BipartiteGraph, a: int, b: int) -> int:
    """Number of paths a, b1, a1, b: the sum over b1 in N(a) - {b} of |N(b1) & N(b) - {a}|."""
    _check_sides(gp, a, b)
    adj = gp.graph.adjacency
    nb_b = adj[b]
    total = 0
    for b1 in adj[a]:
        if b1 == b:
            continue
        common = adj[b1] & nb_b
        total += len(common) - (a in common)
    return total


def enumerate_paths_len3(gp: BipartiteGraph, a: int, b: int) -> Iterator[tuple[int, int, int, int]]:
    """Explicit enumeration of simple 3-edge paths from ``a`` to ``b``."""
    _check_sides(gp, a, b)
    nb = gp.graph.neighbors
    for b1 in nb[a]:
        for a1 in nb[b1]:
            if len({a, b1, a1, b}) == 4 and gp.has_edge(a1, b):
                yield (a, b1, a1, b)


def path3_count_matrix(gp: BipartiteGraph) -> np.ndarray:
    """``|A'| x |B'|`` matrix of 3-edge path counts, vectorised closed form.

    ``(M M^T M)[a, b]`` counts walks a-b1-a1-b; the degenerate walks are
    those with ``b1 = b`` (``d(b)`` of them, when a~b) or ``a1 = a``
    (``d(a)`` of them, when a~b), with one walk counted in both.
    """
    m = gp.biadjacency
    walks = m @ m.T @ m
    deg_a = m.sum(axis=1)[:, None]
    deg_b = m.sum(axis=0)[None, :]
    return walks - m * (deg_a + deg_b - 1)


@dataclass
class Path3Report:
    pairs_checked: int
    min_count: int | None
    min_slack: Fraction | None
    violations: list[tuple[int, int, int, Fraction]]
    asymptotic_bound: Fraction | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "pairs_checked": self.pairs_checked,
            "min_count": self.min_count,
            "min_slack": encode(self.min_slack) if self.min_slack is not None else None,
            "violations": [[a, b, c, encode(bd)] for a, b, c, bd in self.violations],
            "asymptotic_bound": encode(self.asymptotic_bound) if self.asymptotic_bound is not None else None,
        }


def verify_path3_bound(
    gp: BipartiteGraph,
    t2: Fraction | int,
    t3: Fraction | int,
    *,
    n: int | None = None,
    k: Fraction | None = None,
) -> Path3Report:
    """Check ``paths(a, b) >= (deg(a) - t2 - 1)(t3 - 1)`` for every ``(a, b)`` in A' x B'.

    With ``n`` and ``k`` the asymptotic constant ``n^2 / (2^24 k^7)`` is
    also reported.
    """
    t2, t3 = Fraction(t2), Fraction(t3)
    counts = path3_count_matrix(gp)
    violations = []
    min_count = None
    min_slack = None
    for i, a in enumerate(gp.side_a):
        bound = (gp.degree(a) - t2 - 1) * (t3 - 1)
        row = counts[i]
        for j, b in enumerate(gp.side_b):
            c = int(row[j])
            slack = c - bound
            if min_count is None or c < min_count:
                min_count = c
            if min_slack is None or slack < min_slack:
                min_slack = slack
            if slack < 0:
                violations.append((a, b, c, bound))
    asymptotic = Fraction(n) ** 2 / (2**24 * Fraction(k) ** 7) if n is not None and k is not None else None
    return Path3Report(
        pairs_checked=len(gp.side_a) * len(gp.side_b),
        min_count=min_count,
        min_slack=min_slack,
        violations=violations,
        asymptotic_bound=asymptotic,
    )
