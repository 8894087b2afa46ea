"""Extraction of strongly C8-connected subgraphs from dense graphs.

The pipeline in :mod:`cycleweave.extract` turns a graph with ``n^2/k`` edges
into a bipartite subgraph ``G'``; :mod:`cycleweave.connect` certifies and
verifies that every two edges of ``G'`` lie on a short common cycle.
"""

from .connect import (
    CertificateReport,
    ConnectivityReport,
    CycleWitness,
    EdgePair,
    SelectionExhausted,
    build_witness,
    check_certificate,
    count_paths_len3,
    cycle_through_edges,
    validate_witness,
    verify_path3_bound,
    verify_strong_c8,
)
from .edgelist import read_edge_list, write_edge_list
from .extract import (
    EmptyAfterPeel,
    NotEnoughEdges,
    PaperModePreconditionViolated,
    PipelineTrace,
    audit_trace,
    build_gamma,
    count_bad_pairs,
    extract,
    is_bad,
    local_bipartition,
    peel_to_min_degree,
    prune_sides,
    select_pivot,
)
from .gen import bipartite_random, complete_bipartite, disjoint_cliques, uniform_random
from .graph import (
    BipartiteGraph,
    Graph,
    GraphValidationError,
    bipartite_view,
    common_neighbors,
    degree,
    edge_count,
    from_edge_list,
    induced_subgraph,
)
from .thresholds import ExtractConfig, InvalidThresholds, PivotStrategy, ThresholdSet

__version__ = "0.1.0"
