#pragma once

#include "erhawkes/estimators.hpp"
#include "erhawkes/kernels.hpp"

namespace erhawkes {

enum class Regime { r1, r2, r3, mixed };

// The three fluctuation rate terms. `largest` is always the argmax;
// `dominant` degrades to `mixed` when the largest term does not exceed the
// sum of the others by the separation threshold (a finite-sample proxy for
// the limit ratio conditions; default factor 5).
struct RateTerms {
    double r1;      // 1 / sqrt(K)
    double r2;      // (N/K) sqrt(delta_t / t)
    double r3;      // N / (t sqrt(K))
    double gamma;   // K / N
    double delta_t;
    double separation; // max / (sum - max)
    Regime largest;
    Regime dominant;
};

RateTerms rate_terms(long N, long K, double t, int q, double separation_threshold = 5.0);

struct TheoreticalLaw {
    Regime regime;
    double scale;    // multiplier applied to (p_hat - p)
    double variance; // limit variance of the scaled error
};

// Limit law of the scaled estimation error in the dominant regime.
// Requires a separated regime (else MixedRegime), p > 0 and Lambda p < 1.
TheoreticalLaw theoretical_law(const ModelParams& params, const RateTerms& terms);

// Plug-in normalizer: the max of the three rate terms weighted by the
// estimated constants; the scaled error is asymptotically standard normal.
double combined_normalizer(const Estimates& estimates, long N, long K, double t,
                           double delta_t, double gamma);

// Half-width of the asymptotic confidence interval for p at level alpha,
// using the sum of the three plug-in terms.
double confidence_interval(const Estimates& estimates, long N, long K, double t,
                           double delta_t, double gamma, double alpha);

std::string to_string(Regime regime);

} // namespace erhawkes
