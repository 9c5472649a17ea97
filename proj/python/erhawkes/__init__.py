"""Simulation and inference for partially observed mean-field Hawkes systems
on Bernoulli(p) interaction digraphs."""

from ._erhawkes import (  # noqa: F401
    Adjacency,
    DegenerateEstimate,
    DegenerateSchedule,
    EventLog,
    ExplosionAbort,
    GraphAnalysis,
    Kernel,
    MixedRegime,
    ModelParams,
    OracleDomainError,
    SeriesFailure,
    SpectralFailure,
    SupercriticalModel,
    check_events,
    check_subcritical,
    combined_normalizer,
    confidence_interval,
    delta_schedule,
    ell_bar_limit,
    analyze_graph,
    epsilon_hat,
    estimate,
    estimate_from_raw,
    expected_counts,
    kernel_stats,
    ks_distance,
    limit_triple,
    normal_quantile,
    psi1,
    psi2,
    psi3,
    rate_terms,
    run_experiment,
    run_matrix_experiment,
    simulate,
    simulate_cluster_oracle,
    theoretical_law,
    V_hat,
    X_hat,
)

__version__ = "0.1.0"
