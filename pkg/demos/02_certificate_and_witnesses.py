# A certificate is a few degree/codegree inequalities.  When it holds, every
# pair of edges lies on a short even cycle, and the cycle can be written down
# directly.  Here we build those cycles and cross-check them with the
# exhaustive search.

from collections import Counter

from cycleweave import complete_bipartite
from cycleweave.connect import (
    bipartite_edge_pairs,
    build_witness,
    check_certificate,
    cycle_through_edges,
    validate_witness,
)

k = complete_bipartite(6, 5)  # A = 0..5, B = 6..10
t1, t2, t3 = 5, 1, 5
cert = check_certificate(k, t1, t2, t3)
print("K6,5 certificate:", cert.holds)

lengths = Counter()
for pair in bipartite_edge_pairs(k):
    w = build_witness(k, pair, t2, t3)
    assert validate_witness(k.graph, w) == []
    lengths[pair.relation, w.length] += 1
print("constructed witnesses:", dict(lengths))

pair = next(p for p in bipartite_edge_pairs(k) if p.relation == "disjoint")
print("edges", pair.e, pair.f)
print("  constructed cycle:", build_witness(k, pair, t2, t3).cycle)
print("  searched cycle:   ", cycle_through_edges(k.graph, pair.e, pair.f, 8, even=True).cycle)

# raise t3 past the real codegree and the certificate refuses
print(check_certificate(k, t1, t2, 7).failure_reasons)
