"""Delta-coloring by reduction to (deg+1)-list coloring instances, executed
and validated inside a deterministic round-synchronous simulator."""

from .acd import AlmostCliqueDecomposition, compute_acd, obs22_check, verify_acd
from .classify import (
    ACClassification,
    FinePartition,
    classify_acs,
    find_special,
    fine_partition,
    is_easy,
)
from .graph_core import (
    Graph,
    PartialColoring,
    anti_degree,
    contains_delta_plus_one_clique,
    generate,
    generate_instance,
    load_graph,
    outside_degree,
    save_graph,
    sparsity,
)
from .listcolor import (
    InstanceLedger,
    ListInstance,
    build_instance,
    solve_distributed,
    solve_greedy_oracle,
)
from .oracle_validate import is_k_colorable, validate_coloring
from .phases import (
    PIPELINE_PLAN,
    PipelineConfig,
    PipelineResult,
    WhiteGraySplit,
    color_gray_then_white,
    run_pipeline,
)
from .sim_engine import RoundMetrics, check_congest_budget, run_protocol
from .slackgen import check_lemma33, measure_slack, run_slack_generation
from .thresholds import Thresholds

__version__ = "0.1.0"

__all__ = [
    "ACClassification",
    "AlmostCliqueDecomposition",
    "FinePartition",
    "Graph",
    "InstanceLedger",
    "ListInstance",
    "PIPELINE_PLAN",
    "PartialColoring",
    "PipelineConfig",
    "PipelineResult",
    "RoundMetrics",
    "Thresholds",
    "WhiteGraySplit",
    "color_gray_then_white",
    "anti_degree",
    "build_instance",
    "check_congest_budget",
    "check_lemma33",
    "classify_acs",
    "compute_acd",
    "contains_delta_plus_one_clique",
    "find_special",
    "fine_partition",
    "generate",
    "generate_instance",
    "is_easy",
    "is_k_colorable",
    "load_graph",
    "measure_slack",
    "obs22_check",
    "outside_degree",
    "run_pipeline",
    "run_protocol",
    "run_slack_generation",
    "save_graph",
    "solve_distributed",
    "solve_greedy_oracle",
    "sparsity",
    "validate_coloring",
    "verify_acd",
]
