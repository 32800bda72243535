"""Link prediction benchmarks on networks with tunable clustering.

The pipeline: generate or load a graph (:mod:`linkclust.ba`,
:mod:`linkclust.edgelist`), rewire it to a clustering level while
preserving every degree (:mod:`linkclust.rewire`), score non-adjacent
pairs with similarity indices (:mod:`linkclust.predict`), and evaluate
ranked predictions against held-out edges (:mod:`linkclust.evaluate`).
:mod:`linkclust.experiment` drives the whole sweep from a plan file.
"""

from .ba import BaParams, degree_exponent, generate_ba
from .edgelist import LoadOptions, load_edge_list, parse_edge_lines, save_edge_list
from .evaluate import (
    PrecisionResult,
    ScoreDistribution,
    Split,
    class_separation,
    distribution_rows,
    precision_at_n,
    score_distributions,
    split_edges,
    training_graph,
)
from .experiment import (
    ExperimentPlan,
    ExperimentResult,
    ReportRow,
    TrialRecord,
    derive_seed,
    method_token,
    parse_method_token,
    parse_plan,
    run_experiment,
    write_outputs,
)
from .graph import (
    Graph,
    GraphStats,
    average_clustering,
    build_graph,
    connected_component_sizes,
    drop_isolated_nodes,
    graph_stats,
    local_clustering,
    triangle_count,
)
from .predict import (
    PredictorSpec,
    ScoreTable,
    score_aa,
    score_aa_all,
    score_all,
    score_cn,
    score_cn_all,
    score_katz_all,
    score_ra,
    score_ra_all,
    score_rooted_pr_all,
    score_srw_all,
    spectral_radius_estimate,
)
from .rewire import RewireConfig, RewireOutcome, rewire_step, rewire_to_target

__version__ = "0.1.0"

__all__ = [
    "BaParams",
    "ExperimentPlan",
    "ExperimentResult",
    "Graph",
    "GraphStats",
    "LoadOptions",
    "PrecisionResult",
    "PredictorSpec",
    "ReportRow",
    "RewireConfig",
    "RewireOutcome",
    "ScoreDistribution",
    "ScoreTable",
    "Split",
    "TrialRecord",
    "average_clustering",
    "build_graph",
    "class_separation",
    "connected_component_sizes",
    "degree_exponent",
    "derive_seed",
    "distribution_rows",
    "drop_isolated_nodes",
    "generate_ba",
    "graph_stats",
    "load_edge_list",
    "local_clustering",
    "method_token",
    "parse_edge_lines",
    "parse_method_token",
    "parse_plan",
    "precision_at_n",
    "rewire_step",
    "rewire_to_target",
    "run_experiment",
    "save_edge_list",
    "score_aa",
    "score_aa_all",
    "score_all",
    "score_cn",
    "score_cn_all",
    "score_distributions",
    "score_katz_all",
    "score_ra",
    "score_ra_all",
    "score_rooted_pr_all",
    "score_srw_all",
    "spectral_radius_estimate",
    "split_edges",
    "training_graph",
    "triangle_count",
    "write_outputs",
    "__version__",
]
