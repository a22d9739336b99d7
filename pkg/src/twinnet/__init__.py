"""Compare social-media datasets collected in parallel and the networks built from them."""

from twinnet.centrality import CentralityResult, RankedList, centrality, rank_nodes
from twinnet.clusters import (
    PartitionComparison,
    adjusted_rand_index,
    compare_clusters,
    restrict_partition,
    top_cluster_sizes,
)
from twinnet.ingest import (
    Dataset,
    Gap,
    OverlapReport,
    TimeSeries,
    Tweet,
    activity_timeline,
    dataset_overlap,
    detect_gaps,
    parse_dataset,
    read_dataset,
    write_dataset,
)
from twinnet.longitudinal import LongitudinalSeries, longitudinal_compare
from twinnet.louvain import Partition, louvain, modularity
from twinnet.metrics import (
    NetworkStats,
    density,
    diameter,
    max_k_core,
    network_stats,
    reciprocity,
    transitivity,
    weak_components,
)
from twinnet.network import KINDS, InteractionGraph, build_network
from twinnet.rankcompare import (
    CommonRanking,
    SimilarityScore,
    common_top_k,
    compare_rankings,
    kendall_tau,
    neighborhood_rank_score,
    scatter_data,
    similarity,
    spearman_rho,
)
from twinnet.report import RunConfig, run_compare
from twinnet.stats import DatasetStats, DeltaReport, dataset_stats, stats_delta

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "CentralityResult",
    "CommonRanking",
    "Dataset",
    "DatasetStats",
    "DeltaReport",
    "Gap",
    "InteractionGraph",
    "LongitudinalSeries",
    "NetworkStats",
    "OverlapReport",
    "Partition",
    "PartitionComparison",
    "RankedList",
    "RunConfig",
    "SimilarityScore",
    "TimeSeries",
    "Tweet",
    "activity_timeline",
    "adjusted_rand_index",
    "build_network",
    "centrality",
    "common_top_k",
    "compare_clusters",
    "compare_rankings",
    "dataset_overlap",
    "dataset_stats",
    "density",
    "detect_gaps",
    "diameter",
    "kendall_tau",
    "longitudinal_compare",
    "louvain",
    "max_k_core",
    "modularity",
    "neighborhood_rank_score",
    "network_stats",
    "parse_dataset",
    "rank_nodes",
    "read_dataset",
    "reciprocity",
    "restrict_partition",
    "run_compare",
    "scatter_data",
    "similarity",
    "spearman_rho",
    "stats_delta",
    "top_cluster_sizes",
    "transitivity",
    "weak_components",
    "write_dataset",
]
