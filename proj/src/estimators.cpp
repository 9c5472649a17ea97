#include "erhawkes/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "erhawkes/errors.hpp"

namespace erhawkes {

DeltaSchedule delta_schedule(double t, int q) {
    if (!(t > 0.0)) throw std::invalid_argument("delta_schedule: t must be > 0");
    if (q <= 3) throw std::invalid_argument("delta_schedule: q must exceed 3");
    const double exponent = 1.0 - 4.0 / (q + 1.0);
    // Nudge before flooring so exact integer powers are not lost to pow().
    const double raw = std::pow(t, exponent);
    const long m = static_cast<long>(std::floor(raw * (1.0 + 1e-12) + 1e-9));
    if (m < 1)
        throw DegenerateSchedule("delta_schedule: floor(t^(1-4/(q+1))) = 0 at t = " +
                                 std::to_string(t));
    return DeltaSchedule{t / (2.0 * static_cast<double>(m)), m};
}

namespace {

void validate(const EstimatorInput& in) {
    if (!(in.t > 0.0)) throw std::invalid_argument("estimator input: t must be > 0");
    if (in.K < 1 || in.K > in.N)
        throw std::invalid_argument("estimator input: need 1 <= K <= N");
    if (in.K > in.log.n)
        throw std::invalid_argument("estimator input: K exceeds the processes in the log");
    if (!(2.0 * in.t <= in.log.horizon * (1.0 + 1e-12)))
        throw std::invalid_argument("estimator input: log horizon must be >= 2t");
}

} // namespace

double epsilon_hat(const EstimatorInput& in) {
    validate(in);
    std::size_t total = 0;
    for (int i = 0; i < in.K; ++i)
        total += in.log.count_at(i, 2.0 * in.t) - in.log.count_at(i, in.t);
    return static_cast<double>(total) / (in.t * static_cast<double>(in.K));
}

double V_hat(const EstimatorInput& in) {
    validate(in);
    const double eps = epsilon_hat(in);
    double dispersion = 0.0;
    for (int i = 0; i < in.K; ++i) {
        const double inc =
            static_cast<double>(in.log.count_at(i, 2.0 * in.t) - in.log.count_at(i, in.t));
        const double d = inc / in.t - eps;
        dispersion += d * d;
    }
    const double dN = static_cast<double>(in.N);
    return dN / static_cast<double>(in.K) * dispersion - dN / in.t * eps;
}

RawStats raw_stats(const EstimatorInput& in) {
    validate(in);
    const auto schedule = delta_schedule(in.t, in.q);
    const long m = schedule.half_blocks;
    const long blocks = 2 * m;

    RawStats s;
    s.delta_t = schedule.delta;

    // One sweep: per-process increments for epsilon/V, block bin sums for Z.
    std::vector<double> bins(blocks, 0.0);
    std::size_t total = 0;
    std::vector<std::size_t> increments(in.K, 0);
    for (int i = 0; i < in.K; ++i) {
        const auto& ev = in.log.events[i];
        const auto first = std::upper_bound(ev.begin(), ev.end(), in.t);
        const auto last = std::upper_bound(ev.begin(), ev.end(), 2.0 * in.t);
        increments[i] = static_cast<std::size_t>(last - first);
        total += increments[i];
        for (auto it = first; it != last; ++it) {
            // Block a covers ((a-1)delta, a delta]; ceil lands boundary
            // times in the lower block, exactly as the half-open intervals
            // require.
            const double x = (*it - in.t) * static_cast<double>(blocks) / in.t;
            long b = static_cast<long>(std::ceil(x)) - 1;
            b = std::clamp(b, 0L, blocks - 1);
            bins[b] += 1.0;
        }
    }

    const double dK = static_cast<double>(in.K);
    const double dN = static_cast<double>(in.N);
    s.epsilon = static_cast<double>(total) / (in.t * dK);

    double dispersion = 0.0;
    for (int i = 0; i < in.K; ++i) {
        const double d = static_cast<double>(increments[i]) / in.t - s.epsilon;
        dispersion += d * d;
    }
    s.V = dN / dK * dispersion - dN / in.t * s.epsilon;

    const double target1 = schedule.delta * s.epsilon;
    double z1 = 0.0;
    for (long b = 0; b < blocks; ++b) {
        const double d = bins[b] / dK - target1;
        z1 += d * d;
    }
    s.Z_delta = dN / in.t * z1;

    const double target2 = 2.0 * schedule.delta * s.epsilon;
    double z2 = 0.0;
    for (long c = 0; c < m; ++c) {
        const double d = (bins[2 * c] + bins[2 * c + 1]) / dK - target2;
        z2 += d * d;
    }
    s.Z_2delta = dN / in.t * z2;

    s.W = 2.0 * s.Z_2delta - s.Z_delta;
    s.X = s.W - (dN - dK) / dK * s.epsilon;
    return s;
}

double X_hat(const EstimatorInput& in) { return raw_stats(in).X; }

double psi1(double u, double v, double w) {
    if (u > 0.0 && v > 0.0 && w > u) return u * std::sqrt(u / w);
    return 0.0;
}

double psi2(double u, double v, double w) {
    if (u > 0.0 && v > 0.0 && w > u) {
        const double p1 = u * std::sqrt(u / w);
        return (v + (u - p1) * (u - p1)) / (u * (u - p1));
    }
    return 0.0;
}

double psi3(double u, double v, double w) {
    if (u > 0.0 && v > 0.0 && w > 0.0) {
        const double root = 1.0 - std::sqrt(u / w);
        const double f2 = u * u * root * root;
        return f2 / (v + f2);
    }
    return 0.0;
}

Estimates estimate_from_raw(double epsilon, double V, double X) {
    Estimates e;
    e.raw.epsilon = epsilon;
    e.raw.V = V;
    e.raw.X = X;
    e.mu_hat = psi1(epsilon, V, X);
    e.lambda_hat = psi2(epsilon, V, X);
    e.p_hat = psi3(epsilon, V, X);
    return e;
}

Estimates estimate(const EstimatorInput& in) {
    const RawStats raw = raw_stats(in);
    Estimates e = estimate_from_raw(raw.epsilon, raw.V, raw.X);
    e.raw = raw;
    return e;
}

} // namespace erhawkes
