#include "erhawkes/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace erhawkes::stats {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0))
        throw std::invalid_argument("normal_quantile: prob must lie in (0,1)");

    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (prob < p_low) {
        double q = std::sqrt(-2.0 * std::log(prob));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (prob <= 1.0 - p_low) {
        double q = prob - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - prob));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley step against the exact CDF.
    double e = normal_cdf(x) - prob;
    double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double ks_distance_normal(std::vector<double> samples, double sd) {
    if (!(sd > 0.0))
        throw std::invalid_argument("ks_distance_normal: sd must be positive");
    if (samples.size() < 20)
        throw std::invalid_argument("ks_distance_normal: need at least 20 samples");

    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = normal_cdf(samples[i] / sd);
        double lo = f - static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n - f;
        dist = std::max(dist, std::max(lo, hi));
    }
    return dist;
}

SampleSummary summarize(const std::vector<double>& xs) {
    SampleSummary s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n < 2) return s;
    double m2 = 0.0, m3 = 0.0;
    for (double x : xs) {
        double d = x - s.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    s.sd = std::sqrt(m2 / static_cast<double>(s.n - 1));
    double sigma = std::sqrt(m2 / static_cast<double>(s.n));
    if (sigma > 0.0) s.skew = (m3 / static_cast<double>(s.n)) / (sigma * sigma * sigma);
    return s;
}

} // namespace erhawkes::stats
