"""Monte Carlo experiments with pre-registered pass/fail verdicts."""

from .config import DEFAULT_TOLERANCES, EXPERIMENTS, CouplingError, ExperimentConfig
from .runners import (
    REGISTRY,
    run,
    run_divergence_checks,
    run_equivalence,
    run_frontier,
    run_hv_check,
    run_lln_besov,
    run_lln_fb,
    run_logsup,
    run_mean_identity,
    run_tail,
    run_weak_variance,
    tail_sigma,
)
from .summary import ExperimentSummary, Verdict, fit_slope, mean_se

__all__ = [
    "DEFAULT_TOLERANCES",
    "EXPERIMENTS",
    "REGISTRY",
    "CouplingError",
    "ExperimentConfig",
    "ExperimentSummary",
    "Verdict",
    "fit_slope",
    "mean_se",
    "run",
    "run_divergence_checks",
    "run_equivalence",
    "run_frontier",
    "run_hv_check",
    "run_lln_besov",
    "run_lln_fb",
    "run_logsup",
    "run_mean_identity",
    "run_tail",
    "run_weak_variance",
    "tail_sigma",
]
