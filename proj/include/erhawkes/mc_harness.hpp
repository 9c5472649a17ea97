#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erhawkes/asymptotics.hpp"
#include "erhawkes/kernels.hpp"

namespace erhawkes {

enum class RunMode {
    full,        // graph -> simulate -> estimate per replicate
    matrix_only, // graph sampling and matrix limit quantities only
    p_zero       // full pipeline specialized to p = 0 (enforced)
};

struct ExperimentConfig {
    ModelParams params;
    long N = 100;
    int K = 100;
    double t = 100.0;
    long replicates = 100;
    std::uint64_t master_seed = 1;
    RunMode mode = RunMode::full;
    double separation_threshold = 5.0;
    double alpha = 0.05;
    int workers = 0; // 0 = hardware concurrency
    std::uint64_t max_events = 100000000;
    int scaling_levels = 1; // matrix mode: also run (2^l N, 2^l K), l < levels
};

// One row per replicate. In matrix_only mode the estimator columns carry
// the matrix quantities instead: epsilon = ell_bar_K, V = V_inf, X = X_inf,
// and z = sqrt(K) (V_inf - v*).
struct ReplicateRecord {
    long index = 0;
    bool ok = false;
    bool omega = false;
    double p_hat = 0.0;
    double mu_hat = 0.0;
    double lambda_hat = 0.0;
    double epsilon = 0.0;
    double V = 0.0;
    double X = 0.0;
    double z = 0.0;
    std::string error;
};

struct ScalingRow {
    long N = 0;
    int K = 0;
    long replicates = 0;
    double mean_sq_err = 0.0; // MC mean of 1_Omega |ell_bar_K - 1/(1-Lambda p)|^2
};

struct MCReport {
    ExperimentConfig config;
    std::vector<ReplicateRecord> records;

    RateTerms terms{};
    bool regime_ambiguous = false; // z normalized with the argmax regime anyway
    double theoretical_sd = 0.0;   // of the scaled error in that regime; NaN if undefined
    double mean_z = 0.0, sd_z = 0.0, skew_z = 0.0;
    bool sd_defined = false; // false when fewer than 2 usable replicates
    double ks = 0.0;
    bool ks_valid = false;
    double ci_coverage = 0.0;
    double omega_fraction = 0.0;
    double mean_p_hat = 0.0, sd_p_hat = 0.0;
    double frac_p_below_01 = 0.0; // fraction of p_hat < 0.1
    double frac_p_above_09 = 0.0; // fraction of p_hat > 0.9
    long excluded = 0;
    double runtime_sec = 0.0;

    // matrix mode extras
    double v_star = 0.0;
    std::vector<ScalingRow> scaling;
};

// Replicated end-to-end experiment; deterministic in config.master_seed,
// replicate results keyed by index so worker scheduling cannot change them.
// Failed replicates (explosion, spectral failure) are recorded and counted,
// never silently dropped.
MCReport run_experiment(const ExperimentConfig& config);

// Graph-only experiment for the matrix-level limit theorems; no simulation.
MCReport run_matrix_experiment(const ExperimentConfig& config);

void write_replicates_csv(const MCReport& report, const std::string& path);
void write_summary_json(const MCReport& report, const std::string& path);
void write_scaling_csv(const MCReport& report, const std::string& path);

} // namespace erhawkes
