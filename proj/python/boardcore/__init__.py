from ._boardcore import (
    PipelineError,
    RankDeficientError,
    SeparationError,
    brokerage_scores,
    default_config,
    fit_logistic,
    prune_brokers,
    run_pipeline,
    sensitivity_sweep,
    synthesize,
    weighted_kcore,
)

__all__ = [
    "PipelineError",
    "RankDeficientError",
    "SeparationError",
    "brokerage_scores",
    "default_config",
    "fit_logistic",
    "prune_brokers",
    "run_pipeline",
    "sensitivity_sweep",
    "synthesize",
    "weighted_kcore",
]
