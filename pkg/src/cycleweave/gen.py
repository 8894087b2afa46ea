"""Deterministic instance generators.

Random families draw from numpy's PCG64 bit generator seeded with the given
64-bit integer.  An edge with probability ``p = num/den`` is kept when an
integer drawn uniformly from ``[0, den)`` is below ``num``, so ``p = 0`` and
``p = 1`` are exact and no float enters the decision.  Candidate pairs are
visited in lexicographic order, one draw each.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal

import numpy as np

from .graph import BipartiteGraph, Graph, from_edge_list
from .thresholds import RationalLike, rational

Family = Literal["disjoint_cliques", "uniform_random", "bipartite_random", "complete_bipartite"]


@dataclass(frozen=True)
class GenSpec:
    family: Family
    n: int
    parameter: Fraction
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.family in ("uniform_random", "bipartite_random") and not 0 <= self.parameter <= 1:
            raise ValueError(f"probability must lie in [0, 1], got {self.parameter}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "n": self.n,
            "parameter": {"num": self.parameter.numerator, "den": self.parameter.denominator},
            "seed": self.seed,
        }


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _probability(p: RationalLike) -> Fraction:
    q = rational(p)
    if not 0 <= q <= 1:
        raise ValueError(f"probability must lie in [0, 1], got {q}")
    return q


def _keep(rng: np.random.Generator, p: Fraction, size: int) -> np.ndarray:
    return rng.integers(0, p.denominator, size=size, dtype=np.int64) < p.numerator


def parts_from_beta(n: int, beta: float) -> int:
    """Number of cliques for the ``n**beta`` tightness instance, rounded to nearest, at least 1."""
    return min(n, max(1, round(n**beta)))


def clique_sizes(n: int, parts: int) -> list[int]:
    q, r = divmod(n, parts)
    return [q + 1] * r + [q] * (parts - r)


def disjoint_cliques(n: int, parts: int) -> Graph:
    """``parts`` vertex-disjoint cliques on consecutive ids, larger cliques first."""
    if not 1 <= parts <= n:
        raise ValueError(f"need 1 <= parts <= n, got parts={parts}, n={n}")
    pairs = []
    start = 0
    for size in clique_sizes(n, parts):
        members = range(start, start + size)
        pairs.extend((u, v) for u in members for v in members if u < v)
        start += size
    return from_edge_list(n, pairs)


def uniform_random(n: int, p: RationalLike, seed: int) -> Graph:
    """G(n, p) with one PCG64 draw per pair ``(i, j)``, ``i < j``, lexicographic."""
    q = _probability(p)
    iu, ju = np.triu_indices(n, k=1)
    keep = _keep(_rng(seed), q, iu.size)
    return from_edge_list(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def complete_bipartite(a: int, b: int) -> BipartiteGraph:
    """K_{a,b} with side A = ``0..a-1`` and side B = ``a..a+b-1``."""
    if a < 1 or b < 1:
        raise ValueError("both sides need at least one vertex")
    g = from_edge_list(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    return BipartiteGraph(graph=g, side_a=tuple(range(a)), side_b=tuple(range(a, a + b)))


def bipartite_random(a: int, b: int, p: RationalLike, seed: int) -> BipartiteGraph:
    """Random bipartite graph on sides ``0..a-1`` and ``a..a+b-1``, row-major draws."""
    q = _probability(p)
    keep = _keep(_rng(seed), q, a * b).reshape(a, b)
    rows, cols = np.nonzero(keep)
    g = from_edge_list(a + b, zip(rows.tolist(), (cols + a).tolist()))
    return BipartiteGraph(graph=g, side_a=tuple(range(a)), side_b=tuple(range(a, a + b)))


def generate(spec: GenSpec) -> Graph:
    """Dispatch on ``spec.family``.  Bipartite families split ``n`` as evenly as possible."""
    if spec.family == "disjoint_cliques":
        return disjoint_cliques(spec.n, int(spec.parameter))
    if spec.family == "uniform_random":
        return uniform_random(spec.n, spec.parameter, spec.seed)
    a = (spec.n + 1) // 2
    b = spec.n - a
    if spec.family == "complete_bipartite":
        return complete_bipartite(a, b).graph
    return bipartite_random(a, b, spec.parameter, spec.seed).graph
