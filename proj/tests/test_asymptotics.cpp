#include <doctest.h>

#include <cmath>

#include "erhawkes/asymptotics.hpp"
#include "erhawkes/errors.hpp"
#include "erhawkes/estimators.hpp"
#include "erhawkes/matrix_oracle.hpp"
#include "erhawkes/rng.hpp"
#include "erhawkes/stats.hpp"

using namespace erhawkes;

namespace {

const ModelParams kHalf{1.0, 0.5, Kernel::exponential(0.5, 1.0), 7};

RateTerms forced(Regime which, double gamma = 1.0) {
    RateTerms t{};
    t.r1 = which == Regime::r1 ? 1.0 : 1e-6;
    t.r2 = which == Regime::r2 ? 1.0 : 1e-6;
    t.r3 = which == Regime::r3 ? 1.0 : 1e-6;
    t.gamma = gamma;
    t.delta_t = 1.0;
    t.largest = which;
    t.dominant = which;
    t.separation = 1e6;
    return t;
}

} // namespace

TEST_CASE("rate terms arithmetic") {
    // At (N=K=100, t=1500, q=7) the block width is 1500/76, and the block
    // term (N/K) sqrt(delta/t) = 0.1147 actually exceeds 1/sqrt(K) = 0.1:
    // no term separates by the factor-5 rule.
    const auto a = rate_terms(100, 100, 1500.0, 7);
    CHECK(a.r1 == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(a.r2 == doctest::Approx(std::sqrt(1500.0 / 76.0 / 1500.0)).epsilon(1e-12));
    CHECK(a.r2 > a.r1);
    CHECK(a.r3 == doctest::Approx(100.0 / (1500.0 * 10.0)).epsilon(1e-12));
    CHECK(a.largest == Regime::r2);
    CHECK(a.dominant == Regime::mixed);

    const auto b = rate_terms(400, 400, 40.0, 7);
    CHECK(b.r3 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b.largest == Regime::r3);

    const auto c = rate_terms(64, 64, 40.0, 7);
    CHECK(c.gamma == 1.0);

    // A genuinely separated case: huge t and K = N makes 1/sqrt(K) dominate.
    const auto d = rate_terms(100, 100, 4000000.0, 7);
    CHECK(d.largest == Regime::r1);
    CHECK(d.dominant == Regime::r1);
}

TEST_CASE("limit laws per regime") {
    {
        const auto law = theoretical_law(kHalf, forced(Regime::r1));
        CHECK(law.variance == doctest::Approx(0.0625).epsilon(1e-12));
        CHECK(law.scale == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        const auto law = theoretical_law(kHalf, forced(Regime::r3));
        CHECK(law.variance == doctest::Approx(18.0).epsilon(1e-12));
        CHECK(std::sqrt(law.variance) == doctest::Approx(4.2426).epsilon(1e-4));
    }
    {
        const auto law = theoretical_law(kHalf, forced(Regime::r2, 1.0));
        CHECK(law.variance == doctest::Approx(3.375).epsilon(1e-12));
    }
    {
        RateTerms mixed = forced(Regime::r1);
        mixed.dominant = Regime::mixed;
        CHECK_THROWS_AS(theoretical_law(kHalf, mixed), MixedRegime);
    }
    {
        ModelParams zero_p{1.0, 0.0, Kernel::exponential(0.5, 1.0), 7};
        CHECK_THROWS_AS(theoretical_law(zero_p, forced(Regime::r1)), std::invalid_argument);
    }
}

TEST_CASE("block-regime variance endpoints") {
    const double lambda = 0.5, p = 0.5, one_minus = 1.0 - lambda * p;
    const double base = 6.0 * (1.0 - p) * (1.0 - p) / (lambda * lambda);
    {
        const auto law = theoretical_law(kHalf, forced(Regime::r2, 0.0));
        CHECK(law.variance ==
              doctest::Approx(base * std::pow(one_minus, 6.0)).epsilon(1e-12));
    }
    {
        const auto law = theoretical_law(kHalf, forced(Regime::r2, 1.0));
        CHECK(law.variance ==
              doctest::Approx(base * std::pow(one_minus, 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("regime-one variance equals the fixed-point identity") {
    for (int pi = 1; pi <= 9; ++pi) {
        const double p = 0.1 * pi;
        ModelParams params{1.0, p, Kernel::exponential(0.5, 1.0), 7};
        const auto lt = limit_triple(params);
        const double p_fixed = psi3(lt.u, lt.v, lt.w);
        const auto law = theoretical_law(params, forced(Regime::r1));
        CHECK(law.variance ==
              doctest::Approx(p_fixed * p_fixed * (1 - p_fixed) * (1 - p_fixed)).epsilon(1e-10));
    }
}

TEST_CASE("combined normalizer") {
    Estimates est;
    est.mu_hat = 1.0;
    est.lambda_hat = 0.5;
    est.p_hat = 0.5;
    // Term one dominates: 0.25 / sqrt(1e4) = 0.0025.
    CHECK(combined_normalizer(est, 10000, 10000, 1e8, 1.0, 1.0) ==
          doctest::Approx(0.0025).epsilon(1e-9));

    // Lambda_hat p_hat = 1 kills terms two and three exactly.
    Estimates tight;
    tight.mu_hat = 1.0;
    tight.lambda_hat = 2.0;
    tight.p_hat = 0.5;
    CHECK(combined_normalizer(tight, 100, 100, 10.0, 1.0, 1.0) ==
          doctest::Approx(0.25 / 10.0).epsilon(1e-12));

    Estimates bad;
    bad.mu_hat = 1.0;
    bad.lambda_hat = -0.5;
    bad.p_hat = 0.5;
    CHECK_THROWS_AS(combined_normalizer(bad, 100, 100, 10.0, 1.0, 1.0), DegenerateEstimate);
}

TEST_CASE("normalizer dominates each plug-in term") {
    Xoshiro256pp rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Estimates est;
        est.mu_hat = 0.1 + 2.0 * rng.uniform01();
        est.lambda_hat = 0.1 + 0.8 * rng.uniform01();
        est.p_hat = rng.uniform01();
        const long N = 50 + static_cast<long>(950 * rng.uniform01());
        const long K = 1 + static_cast<long>((N - 1) * rng.uniform01());
        const double t = 16.0 + 500.0 * rng.uniform01();
        const double delta = delta_schedule(t, 7).delta;
        const double gamma = static_cast<double>(K) / N;
        const double mx = combined_normalizer(est, N, K, t, delta, gamma);
        const double ci = confidence_interval(est, N, K, t, delta, gamma, 0.05);
        CHECK(mx <= ci / stats::normal_quantile(0.975) + 1e-15);
        CHECK(3.0 * mx >= ci / stats::normal_quantile(0.975) - 1e-15);
    }
}

TEST_CASE("confidence interval") {
    CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));

    Estimates zero;
    CHECK(confidence_interval(zero, 100, 100, 10.0, 1.0, 1.0, 0.05) == 0.0);

    Estimates est;
    est.mu_hat = 1.0;
    est.lambda_hat = 0.5;
    est.p_hat = 0.5;
    CHECK(confidence_interval(est, 100, 100, 10.0, 1.0, 1.0, 1.0) == 0.0);

    double prev = 1e300;
    for (double alpha : {0.01, 0.05, 0.1, 0.5, 0.9}) {
        const double width = confidence_interval(est, 100, 100, 100.0, 2.0, 1.0, alpha);
        CHECK(width < prev);
        prev = width;
    }
}

TEST_CASE("normal quantile round-trips through the CDF") {
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-6})
        CHECK(stats::normal_cdf(stats::normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
}
