"""Cyclostationary spectrum sensing simulator: signal models, CSD detector,
decision fusion, optimal vote count and PSO threshold adaptation."""

from ._core import (
    ConfigError,
    ContourSource,
    CsdEstimate,
    DetectorConfig,
    FusionRule,
    IoError,
    OfdmParams,
    PsoConfig,
    PsoResult,
    RocCurve,
    RocPoint,
    RunError,
    Scenario,
    TrialStats,
    UserCountResult,
    apply_awgn,
    brute_force_optimal_n,
    cyclic_autocorrelation,
    cyclostationary_statistic,
    decide,
    energy_statistic,
    error_total,
    estimate_csd,
    export_csd_contour,
    full_alpha_grid,
    fusion_probability,
    generate_noise,
    generate_ofdm,
    generate_tone,
    load_scenario,
    optimal_n,
    parse_scenario,
    peak_statistic,
    pso_run,
    roc_curve,
    rule_to_k,
    run_trials,
    targeted_alpha_set,
)

__all__ = [name for name in dir() if not name.startswith("_")]
