"""Degree-profile graph matching for partially overlapping graph pairs.

The library is organized around a small immutable Graph type plus pure
functions: generators produce correlated graph pairs with ground truth,
profile distances feed the matchers, and the benchmark subpackage turns
matcher output into reproducible CSV experiments.
"""

from .assignment import BipartiteCandidates, linear_assignment_max, max_bipartite_matching
from .community import (
    CommunityMatchOutcome,
    CommunityPartition,
    community_match_all,
    community_match_refined,
    kmeans,
    score,
    select_best_mu,
)
from .exhaustive import OracleResult, exhaustive_match
from .generators import (
    ChildPair,
    ChildSample,
    ErdosRenyi,
    StochasticBlockModel,
    make_pair,
    sample_bernoulli,
    sample_child,
    sbm_from_rate,
    sbm_theta,
)
from .graphs import (
    Graph,
    from_edge_list,
    induced_subgraph,
    permute,
    read_edge_list,
    read_matrix,
    threshold_to_graph,
    write_edge_list,
    write_matrix,
)
from .matchers import (
    CandidateMatrix,
    MatchResult,
    SeedSet,
    dp_match,
    ee_match,
    ee_post,
    ee_pre,
    grid_search_thresholds,
    nearest_rank_quantile,
    refine_matching,
    similarity_common_neighbors,
)
from .profiles import (
    degree_profile,
    distance_matrix,
    read_distance_matrix,
    w1_distance,
    write_distance_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteCandidates",
    "CandidateMatrix",
    "ChildPair",
    "ChildSample",
    "CommunityMatchOutcome",
    "CommunityPartition",
    "ErdosRenyi",
    "Graph",
    "MatchResult",
    "OracleResult",
    "SeedSet",
    "StochasticBlockModel",
    "community_match_all",
    "community_match_refined",
    "degree_profile",
    "distance_matrix",
    "dp_match",
    "ee_match",
    "ee_post",
    "ee_pre",
    "exhaustive_match",
    "from_edge_list",
    "grid_search_thresholds",
    "induced_subgraph",
    "kmeans",
    "linear_assignment_max",
    "make_pair",
    "max_bipartite_matching",
    "nearest_rank_quantile",
    "permute",
    "read_edge_list",
    "read_distance_matrix",
    "read_matrix",
    "refine_matching",
    "sample_bernoulli",
    "sample_child",
    "sbm_from_rate",
    "sbm_theta",
    "score",
    "select_best_mu",
    "similarity_common_neighbors",
    "threshold_to_graph",
    "w1_distance",
    "write_distance_matrix",
    "write_edge_list",
    "write_matrix",
]
