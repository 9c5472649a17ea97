#include "erhawkes/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "erhawkes/errors.hpp"
#include "erhawkes/stats.hpp"

namespace erhawkes {

RateTerms rate_terms(long N, long K, double t, int q, double separation_threshold) {
    if (K < 1 || K > N) throw std::invalid_argument("rate_terms: need 1 <= K <= N");
    const auto schedule = delta_schedule(t, q);

    RateTerms r;
    const double dN = static_cast<double>(N), dK = static_cast<double>(K);
    r.delta_t = schedule.delta;
    r.gamma = dK / dN;
    r.r1 = 1.0 / std::sqrt(dK);
    r.r2 = dN / dK * std::sqrt(schedule.delta / t);
    r.r3 = dN / (t * std::sqrt(dK));

    double mx = r.r1;
    r.largest = Regime::r1;
    if (r.r2 > mx) { mx = r.r2; r.largest = Regime::r2; }
    if (r.r3 > mx) { mx = r.r3; r.largest = Regime::r3; }
    const double rest = r.r1 + r.r2 + r.r3 - mx;
    r.separation = rest > 0.0 ? mx / rest : std::numeric_limits<double>::infinity();
    r.dominant = r.separation >= separation_threshold ? r.largest : Regime::mixed;
    return r;
}

TheoreticalLaw theoretical_law(const ModelParams& params, const RateTerms& terms) {
    if (terms.dominant == Regime::mixed)
        throw MixedRegime("theoretical_law: no rate term dominates under the separation rule");
    if (!(params.p > 0.0))
        throw std::invalid_argument("theoretical_law: requires p > 0");
    const auto sc = check_subcritical(params);
    const double lambda = params.kernel.total_mass();
    const double one_minus = 1.0 - sc.branching;

    TheoreticalLaw law;
    law.regime = terms.dominant;
    switch (terms.dominant) {
        case Regime::r1:
            law.scale = 1.0 / terms.r1;
            law.variance = params.p * params.p * (1.0 - params.p) * (1.0 - params.p);
            break;
        case Regime::r2: {
            law.scale = 1.0 / terms.r2;
            const double bracket = (1.0 - terms.gamma) * one_minus * one_minus * one_minus +
                                   terms.gamma * one_minus;
            const double c = (1.0 - params.p) / lambda * bracket;
            law.variance = 6.0 * c * c;
            break;
        }
        case Regime::r3:
            law.scale = 1.0 / terms.r3;
            law.variance = 2.0 * one_minus * one_minus /
                           (params.mu * params.mu * lambda * lambda * lambda * lambda);
            break;
        case Regime::mixed:
            break; // unreachable
    }
    return law;
}

namespace {

struct PluginTerms {
    double t1, t2, t3;
    bool all_zero;
};

PluginTerms plugin_terms(const Estimates& est, long N, long K, double t, double delta_t,
                         double gamma) {
    const double mu = est.mu_hat, lam = est.lambda_hat, p = est.p_hat;
    PluginTerms out{0.0, 0.0, 0.0, false};
    if (mu == 0.0 && lam == 0.0 && p == 0.0) {
        out.all_zero = true;
        return out;
    }
    if (!(mu > 0.0) || !(lam > 0.0)) {
        std::ostringstream msg;
        msg << "plug-in normalizer: mu_hat = " << mu << ", Lambda_hat = " << lam
            << " leave a non-positive denominator";
        throw DegenerateEstimate(msg.str());
    }
    const double dN = static_cast<double>(N), dK = static_cast<double>(K);
    const double one_minus = 1.0 - lam * p;
    out.t1 = p * (1.0 - p) / std::sqrt(dK);
    out.t2 = dN / (t * std::sqrt(dK)) * std::sqrt(2.0) * one_minus / (mu * lam * lam);
    out.t3 = dN / dK * std::sqrt(6.0 * delta_t / t) * (1.0 - p) / lam *
             ((1.0 - gamma) * one_minus * one_minus * one_minus + gamma * one_minus);
    return out;
}

} // namespace

double combined_normalizer(const Estimates& estimates, long N, long K, double t,
                           double delta_t, double gamma) {
    const auto terms = plugin_terms(estimates, N, K, t, delta_t, gamma);
    if (terms.all_zero) return 0.0;
    return std::max({terms.t1, terms.t2, terms.t3});
}

double confidence_interval(const Estimates& estimates, long N, long K, double t,
                           double delta_t, double gamma, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("confidence_interval: alpha must lie in (0, 1]");
    const double quantile = alpha >= 1.0 ? 0.0 : stats::normal_quantile(1.0 - alpha / 2.0);
    if (quantile == 0.0) return 0.0;
    const auto terms = plugin_terms(estimates, N, K, t, delta_t, gamma);
    if (terms.all_zero) return 0.0;
    return quantile * (terms.t1 + terms.t2 + terms.t3);
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::r1: return "i";
        case Regime::r2: return "iii";
        case Regime::r3: return "ii";
        case Regime::mixed: return "mixed";
    }
    return "?";
}

} // namespace erhawkes
