"""
cyclepack - arc-disjoint directed 4-cycle packings

Eulerian orientations of complete bipartite graphs, regular tournaments and
interchange graphs of 0/1 matrix classes, with exact oracles and independent
verifiers for every packing and decomposition.
"""

from ._version import __version__
from .census import (
    ANTIPODAL_CONSTANT,
    BALANCE_POINT,
    PACKING_CONSTANT,
    TOURNAMENT_CONSTANT,
    ArcProfile,
    BoundReport,
    Census,
    CoDegreeTable,
    arc_profile,
    balanced_objective,
    codegree_table,
    enumerate_four_cycles,
    evaluate_bounds,
    fast_four_cycle_count,
    four_cycle_census,
)
from .config import Limits, SamplerConfig
from .errors import (
    CertificateError,
    CyclePackError,
    DomainError,
    EncodingError,
    ResourceError,
    StructuralError,
)
from .experiment import (
    ExperimentReport,
    PairGraph,
    PartitionOutcome,
    chernoff_tail_estimate,
    chernoff_vertex_bound,
    pair_graph,
    partition_vertices,
    run_partition_experiment,
)
from .interchange import (
    AntipodalReport,
    DiameterReport,
    DistanceRecord,
    MarginMatrix,
    antipodal_audit,
    bfs_distance,
    diameter,
    difference_digraph,
    enumerate_matrix_class,
    gale_ryser_feasible,
    interchange_graph,
    interchange_neighbors,
    walkup_distance,
    walkup_lower_bound,
)
from .model import (
    ArcRef,
    BipartiteTournament,
    RegularTournament,
    ValidationReport,
    arcs,
    orientation_digraph,
    validate_bipartite,
    validate_tournament,
)
from .packing import (
    C4Hypergraph,
    Decomposition,
    Packing,
    PackMethod,
    build_c4_hypergraph,
    color_pack,
    exact_max_pack,
    greedy_pack,
    local_search_pack,
    max_cycle_decomposition,
    verify_decomposition,
    verify_packing,
)
from .report import RunReport
from .sampling import (
    canonical_bipartite,
    canonical_regular_tournament,
    enumerate_eulerian_bipartite,
    randomize_bipartite,
    randomize_tournament,
)
from .verify import verify_sweep

__all__ = [
    "BipartiteTournament",
    "RegularTournament",
    "ArcRef",
    "ValidationReport",
    "validate_bipartite",
    "validate_tournament",
    "arcs",
    "orientation_digraph",
    "Limits",
    "SamplerConfig",
    "canonical_bipartite",
    "canonical_regular_tournament",
    "randomize_bipartite",
    "randomize_tournament",
    "enumerate_eulerian_bipartite",
    "Census",
    "CoDegreeTable",
    "ArcProfile",
    "BoundReport",
    "four_cycle_census",
    "fast_four_cycle_count",
    "codegree_table",
    "enumerate_four_cycles",
    "arc_profile",
    "evaluate_bounds",
    "balanced_objective",
    "BALANCE_POINT",
    "PACKING_CONSTANT",
    "TOURNAMENT_CONSTANT",
    "ANTIPODAL_CONSTANT",
    "Packing",
    "PackMethod",
    "Decomposition",
    "C4Hypergraph",
    "build_c4_hypergraph",
    "greedy_pack",
    "local_search_pack",
    "color_pack",
    "exact_max_pack",
    "max_cycle_decomposition",
    "verify_packing",
    "verify_decomposition",
    "MarginMatrix",
    "DistanceRecord",
    "gale_ryser_feasible",
    "enumerate_matrix_class",
    "interchange_neighbors",
    "interchange_graph",
    "bfs_distance",
    "difference_digraph",
    "walkup_distance",
    "walkup_lower_bound",
    "DiameterReport",
    "AntipodalReport",
    "antipodal_audit",
    "diameter",
    "PartitionOutcome",
    "PairGraph",
    "ExperimentReport",
    "partition_vertices",
    "pair_graph",
    "run_partition_experiment",
    "chernoff_tail_estimate",
    "chernoff_vertex_bound",
    "RunReport",
    "verify_sweep",
    "CyclePackError",
    "StructuralError",
    "EncodingError",
    "DomainError",
    "ResourceError",
    "CertificateError",
    "__version__",
]
