#pragma once

#include "erhawkes/hawkes_sim.hpp"

namespace erhawkes {

// Block width schedule: delta = t / (2 floor(t^(1-4/(q+1)))), so that
// t / (2 delta) is a positive integer by construction.
struct DeltaSchedule {
    double delta;
    long half_blocks; // t / (2 delta)
};

// Requires t >= 1 and q > 3; raises DegenerateSchedule when the floor
// collapses to zero.
DeltaSchedule delta_schedule(double t, int q);

// The estimators read only the window (t, 2t] of the first K processes,
// so the log horizon must be at least 2t.
struct EstimatorInput {
    const EventLog& log;
    long N;   // full population size
    int K;    // observed processes
    double t; // estimation time
    int q;    // moment index driving the block schedule
};

struct RawStats {
    double epsilon = 0.0;
    double V = 0.0;
    double X = 0.0;
    double Z_delta = 0.0;
    double Z_2delta = 0.0;
    double W = 0.0;
    double delta_t = 0.0;
};

// Mean increment rate over (t, 2t] of the observed processes.
double epsilon_hat(const EstimatorInput& input);

// Cross-sectional dispersion statistic; the bias correction -(N/t) epsilon
// can make it negative, which is deliberately not clamped.
double V_hat(const EstimatorInput& input);

// Temporal block statistic combining the two block widths.
double X_hat(const EstimatorInput& input);

// All three statistics in one pass over the log.
RawStats raw_stats(const EstimatorInput& input);

// Closed-form maps from (u, v, w) to the parameter estimates. Total
// functions: outside their domain clauses they return 0.
double psi1(double u, double v, double w); // -> mu
double psi2(double u, double v, double w); // -> Lambda
double psi3(double u, double v, double w); // -> p, always in [0, 1]

struct Estimates {
    double mu_hat = 0.0;
    double lambda_hat = 0.0;
    double p_hat = 0.0;
    RawStats raw;
};

Estimates estimate(const EstimatorInput& input);
Estimates estimate_from_raw(double epsilon, double V, double X);

} // namespace erhawkes
