"""Scheduling traffic demand matrices across parallel optical circuit switches."""

from ocsched.matrix import (
    DemandMatrix,
    PermutationMatching,
    WeightedDecomposition,
    add_gaussian_noise,
    covers,
    degree,
    load_matrix,
    normalize_doubly_stochastic,
    save_matrix,
    support,
)
from ocsched.assignment import CoverageConstrainedProblem, mwm_node_coverage, solve_lap
from ocsched.decompose import DecomposeResult, decompose, refine
from ocsched.schedule import (
    ParallelSchedule,
    SwitchProgram,
    equalize,
    makespan,
    schedule_lpt,
    verify,
)
from ocsched.bounds import (
    BoundReport,
    LineStats,
    combined_lower_bound,
    degree_prob_exact,
    degree_prob_model,
    estimate_degree_prob,
    lb1,
    lb2,
    line_stats,
)
from ocsched.baseline import SparsitySplit, baseline_schedule, sparsity_split
from ocsched.workloads import BenchmarkSpec, gen_benchmark, gen_synthetic_skewed, load_csv
from ocsched.harness import ExperimentConfig, ResultRow, run_experiment, spectra

__all__ = [
    "DemandMatrix",
    "PermutationMatching",
    "WeightedDecomposition",
    "support",
    "degree",
    "covers",
    "normalize_doubly_stochastic",
    "add_gaussian_noise",
    "load_matrix",
    "save_matrix",
    "CoverageConstrainedProblem",
    "solve_lap",
    "mwm_node_coverage",
    "DecomposeResult",
    "decompose",
    "refine",
    "SwitchProgram",
    "ParallelSchedule",
    "schedule_lpt",
    "equalize",
    "makespan",
    "verify",
    "LineStats",
    "BoundReport",
    "lb1",
    "lb2",
    "line_stats",
    "combined_lower_bound",
    "degree_prob_exact",
    "degree_prob_model",
    "estimate_degree_prob",
    "SparsitySplit",
    "sparsity_split",
    "baseline_schedule",
    "BenchmarkSpec",
    "gen_benchmark",
    "gen_synthetic_skewed",
    "load_csv",
    "ExperimentConfig",
    "ResultRow",
    "run_experiment",
    "spectra",
]
