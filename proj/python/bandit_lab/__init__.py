"""Simulator for quantum heavy-tailed bandits (C++ core)."""

from ._core import (
    ConfigError,
    ExperimentConfig,
    RegretTrace,
    ae_estimate,
    ae_outcomes,
    ae_pmf,
    confidence_radius,
    default_truncation,
    epoch_bound,
    heavy_qlinucb,
    heavy_qucb,
    instance_means,
    linucb,
    pareto_mean,
    parse_config,
    qme,
    qme_error_bound,
    qtme_pareto,
    robust_ucb,
    run_experiment,
    truncated_mean,
    u_bound,
    wls_update,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
