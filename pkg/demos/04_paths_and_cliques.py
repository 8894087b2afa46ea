# Two small experiments.
#
# 1) Paths of length three between a and b, counted three ways.
# 2) Disjoint cliques: no two cliques share a neighbor, so whatever the
#    pipeline extracts stays inside one clique.

from cycleweave import ExtractConfig, ThresholdSet, bipartite_random, complete_bipartite, disjoint_cliques, extract
from cycleweave.connect import count_paths_len3, enumerate_paths_len3, path3_count_matrix, verify_path3_bound

gp = bipartite_random(6, 7, "3/5", seed=3)
a, b = gp.side_a[0], gp.side_b[0]
print("paths", a, "->", b, ":", count_paths_len3(gp, a, b), len(list(enumerate_paths_len3(gp, a, b))),
      int(path3_count_matrix(gp)[0, 0]))
print("full count matrix:\n", path3_count_matrix(gp))

k = complete_bipartite(5, 5)
rep = verify_path3_bound(k, 1, 5)
print("K5,5: every pair has", rep.min_count, "paths; bound (deg - t2 - 1)(t3 - 1) = 12")

g = disjoint_cliques(256, 4)
gp, trace = extract(g, ExtractConfig(ThresholdSet.custom(32, 1, "1/2", 10**6)))
print("cliques: G' has", gp.edge_count, "edges on original ids",
      min(gp.graph.labels), "..", max(gp.graph.labels))
