#pragma once

#include <cstddef>
#include <vector>

namespace erhawkes::stats {

// Standard normal CDF.
double normal_cdf(double x);

// Inverse standard normal CDF. Rational approximation (Acklam) followed by
// one Halley refinement; absolute error well below 1e-9 on (0, 1).
double normal_quantile(double prob);

// Sup distance between the empirical CDF of `samples` and the N(0, sd^2)
// CDF. Requires sd > 0 and at least 20 samples.
double ks_distance_normal(std::vector<double> samples, double sd);

struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;   // unbiased (n-1 denominator); 0 when n < 2
    double skew = 0.0; // 0 when sd degenerate
};

SampleSummary summarize(const std::vector<double>& xs);

} // namespace erhawkes::stats
