#include "erhawkes/mc_harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "erhawkes/errors.hpp"
#include "erhawkes/hawkes_sim.hpp"
#include "erhawkes/matrix_oracle.hpp"
#include "erhawkes/random_graph.hpp"
#include "erhawkes/rng.hpp"
#include "erhawkes/stats.hpp"

namespace erhawkes {

namespace {

void validate_config(const ExperimentConfig& c) {
    if (c.replicates < 1) throw std::invalid_argument("experiment: replicates must be >= 1");
    if (c.K < 1 || c.K > c.N) throw std::invalid_argument("experiment: need 1 <= K <= N");
    if (c.mode == RunMode::p_zero && c.params.p != 0.0)
        throw std::invalid_argument("experiment: p_zero mode requires p = 0");
    if (c.scaling_levels < 1)
        throw std::invalid_argument("experiment: scaling_levels must be >= 1");
    check_subcritical(c.params);
}

// Dynamic replicate dispatch over a small thread pool; per-replicate seeds
// are derived up front so results do not depend on scheduling.
template <class Fn>
void parallel_replicates(long replicates, int workers, Fn&& body) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int w = workers > 0 ? workers : hw;
    w = static_cast<int>(std::min<long>(w, replicates));
    if (w <= 1) {
        for (long r = 0; r < replicates; ++r) body(r);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int i = 0; i < w; ++i)
        pool.emplace_back([&] {
            for (long r = next.fetch_add(1); r < replicates; r = next.fetch_add(1)) body(r);
        });
    for (auto& th : pool) th.join();
}

void summarize_records(MCReport& rep, double p_true) {
    std::vector<double> zs, ps;
    long omega_count = 0;
    for (const auto& r : rep.records) {
        if (!r.ok) {
            ++rep.excluded;
            continue;
        }
        if (r.omega) ++omega_count;
        ps.push_back(r.p_hat);
        if (std::isfinite(r.z)) zs.push_back(r.z);
    }
    const long ok_count = static_cast<long>(ps.size());
    rep.omega_fraction = ok_count > 0 ? static_cast<double>(omega_count) / ok_count : 0.0;

    const auto zsum = stats::summarize(zs);
    rep.mean_z = zsum.mean;
    rep.sd_z = zsum.sd;
    rep.skew_z = zsum.skew;
    rep.sd_defined = zsum.n >= 2;

    const auto psum = stats::summarize(ps);
    rep.mean_p_hat = psum.mean;
    rep.sd_p_hat = psum.sd;

    long below = 0, above = 0;
    for (double p : ps) {
        if (p < 0.1) ++below;
        if (p > 0.9) ++above;
    }
    rep.frac_p_below_01 = ok_count > 0 ? static_cast<double>(below) / ok_count : 0.0;
    rep.frac_p_above_09 = ok_count > 0 ? static_cast<double>(above) / ok_count : 0.0;

    rep.ks_valid = false;
    if (zs.size() >= 20 && rep.theoretical_sd > 0.0 && std::isfinite(rep.theoretical_sd)) {
        rep.ks = stats::ks_distance_normal(zs, rep.theoretical_sd);
        rep.ks_valid = true;
    }
    (void)p_true;
}

} // namespace

MCReport run_experiment(const ExperimentConfig& config) {
    validate_config(config);
    if (config.mode == RunMode::matrix_only) return run_matrix_experiment(config);
    const auto t0 = std::chrono::steady_clock::now();

    MCReport rep;
    rep.config = config;
    rep.records.assign(config.replicates, {});
    rep.terms = rate_terms(config.N, config.K, config.t, config.params.q_moment,
                           config.separation_threshold);

    // Normalization for z: the dominant regime's law; when no term separates
    // fall back to the argmax and flag the report.
    rep.regime_ambiguous = rep.terms.dominant == Regime::mixed;
    rep.theoretical_sd = std::numeric_limits<double>::quiet_NaN();
    double scale = std::numeric_limits<double>::quiet_NaN();
    if (config.params.p > 0.0) {
        RateTerms forced = rep.terms;
        forced.dominant = forced.largest;
        const auto law = theoretical_law(config.params, forced);
        rep.theoretical_sd = std::sqrt(law.variance);
        scale = law.scale;
    }

    const double lambda = config.params.kernel.total_mass();
    const double p_true = config.params.p;
    const double horizon = 2.0 * config.t;

    parallel_replicates(config.replicates, config.workers, [&](long r) {
        ReplicateRecord& rec = rep.records[r];
        rec.index = r;
        try {
            const auto adj = Adjacency::sample(static_cast<int>(config.N), config.params.p,
                                               mix_seed(config.master_seed, 2 * r));
            rec.omega = check_events(adj, lambda, config.K).omega;
            SimOptions opt;
            opt.max_events = config.max_events;
            const auto log = simulate(adj, config.params, horizon,
                                      mix_seed(config.master_seed, 2 * r + 1), opt);
            const auto est = estimate(EstimatorInput{log, config.N, config.K, config.t,
                                                     config.params.q_moment});
            rec.p_hat = est.p_hat;
            rec.mu_hat = est.mu_hat;
            rec.lambda_hat = est.lambda_hat;
            rec.epsilon = est.raw.epsilon;
            rec.V = est.raw.V;
            rec.X = est.raw.X;
            rec.z = std::isfinite(scale) ? scale * (est.p_hat - p_true)
                                         : std::numeric_limits<double>::quiet_NaN();
            rec.ok = true;
        } catch (const std::exception& ex) {
            rec.ok = false;
            rec.error = ex.what();
        }
    });

    summarize_records(rep, p_true);

    // CI coverage at the configured alpha, from each replicate's plug-ins.
    long covered = 0, ok_count = 0;
    for (const auto& r : rep.records) {
        if (!r.ok) continue;
        ++ok_count;
        Estimates est;
        est.mu_hat = r.mu_hat;
        est.lambda_hat = r.lambda_hat;
        est.p_hat = r.p_hat;
        double half = 0.0;
        try {
            half = confidence_interval(est, config.N, config.K, config.t, rep.terms.delta_t,
                                       rep.terms.gamma, config.alpha);
        } catch (const DegenerateEstimate&) {
            half = 0.0;
        }
        if (std::abs(r.p_hat - p_true) <= half) ++covered;
    }
    rep.ci_coverage = ok_count > 0 ? static_cast<double>(covered) / ok_count : 0.0;

    rep.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

MCReport run_matrix_experiment(const ExperimentConfig& config) {
    validate_config(config);
    const auto t0 = std::chrono::steady_clock::now();

    MCReport rep;
    rep.config = config;
    rep.records.assign(config.replicates, {});

    const double lambda = config.params.kernel.total_mass();
    const double ell_limit = ell_bar_limit(config.params);
    rep.v_star = limit_triple(config.params).v;
    rep.theoretical_sd = rep.v_star > 0.0 ? rep.v_star : std::numeric_limits<double>::quiet_NaN();
    try {
        rep.terms = rate_terms(config.N, config.K, config.t, config.params.q_moment,
                               config.separation_threshold);
    } catch (const std::exception&) {
        rep.terms = RateTerms{}; // t is immaterial in matrix mode
    }

    for (int level = 0; level < config.scaling_levels; ++level) {
        const long n_level = config.N << level;
        const int k_level = config.K << level;
        const std::uint64_t level_seed = mix_seed(config.master_seed, 1000003ULL * level);

        std::vector<double> sq_err(config.replicates, 0.0);
        std::vector<char> on_omega(config.replicates, 0);

        parallel_replicates(config.replicates, config.workers, [&](long r) {
            try {
                const auto adj = Adjacency::sample(static_cast<int>(n_level), config.params.p,
                                                   mix_seed(level_seed, r));
                const auto flags = check_events(adj, lambda, k_level);
                const auto g = analyze_graph(adj, lambda, config.params.mu, k_level);
                const double err = g.ell_bar_K - ell_limit;
                sq_err[r] = flags.omega ? err * err : 0.0;
                on_omega[r] = flags.omega ? 1 : 0;
                if (level == 0) {
                    ReplicateRecord& rec = rep.records[r];
                    rec.index = r;
                    rec.omega = flags.omega;
                    rec.epsilon = g.ell_bar_K;
                    rec.V = g.V_inf;
                    rec.X = g.X_inf;
                    rec.z = std::sqrt(static_cast<double>(k_level)) * (g.V_inf - rep.v_star);
                    rec.ok = true;
                }
            } catch (const std::exception& ex) {
                if (level == 0) {
                    rep.records[r].index = r;
                    rep.records[r].ok = false;
                    rep.records[r].error = ex.what();
                }
            }
        });

        ScalingRow row;
        row.N = n_level;
        row.K = k_level;
        row.replicates = config.replicates;
        double acc = 0.0;
        long cnt = 0;
        for (long r = 0; r < config.replicates; ++r) {
            if (on_omega[r]) {
                acc += sq_err[r];
                ++cnt;
            }
        }
        row.mean_sq_err = cnt > 0 ? acc / static_cast<double>(config.replicates) : 0.0;
        rep.scaling.push_back(row);
    }

    summarize_records(rep, config.params.p);
    rep.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace {

void atomic_write(const std::string& path, const std::string& body) {
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "w");
    if (!f) throw ConfigError("cannot open for writing: " + tmp);
    const bool ok = std::fwrite(body.data(), 1, body.size(), f) == body.size();
    if (std::fclose(f) != 0 || !ok) throw ConfigError("write failed: " + tmp);
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ConfigError("rename failed: " + path);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

void write_replicates_csv(const MCReport& report, const std::string& path) {
    std::string body = "index,omega,p_hat,mu_hat,lambda_hat,epsilon,V,X,z\n";
    for (const auto& r : report.records) {
        body += std::to_string(r.index);
        body += r.omega ? ",1," : ",0,";
        body += format_double(r.p_hat) + "," + format_double(r.mu_hat) + "," +
                format_double(r.lambda_hat) + "," + format_double(r.epsilon) + "," +
                format_double(r.V) + "," + format_double(r.X) + "," + format_double(r.z) + "\n";
    }
    atomic_write(path, body);
}

void write_summary_json(const MCReport& report, const std::string& path) {
    nlohmann::json j;
    j["replicates"] = report.config.replicates;
    j["excluded"] = report.excluded;
    j["N"] = report.config.N;
    j["K"] = report.config.K;
    j["t"] = report.config.t;
    j["q"] = report.config.params.q_moment;
    j["mu"] = report.config.params.mu;
    j["p"] = report.config.params.p;
    j["lambda_mass"] = report.config.params.kernel.total_mass();
    j["mode"] = static_cast<int>(report.config.mode);
    j["r1"] = report.terms.r1;
    j["r2"] = report.terms.r2;
    j["r3"] = report.terms.r3;
    j["gamma"] = report.terms.gamma;
    j["delta_t"] = report.terms.delta_t;
    j["regime_separation"] = report.terms.separation;
    j["regime_ambiguous"] = report.regime_ambiguous ? 1 : 0;
    j["theoretical_sd"] = report.theoretical_sd;
    j["mean_z"] = report.mean_z;
    j["sd_z"] = report.sd_z;
    j["skew_z"] = report.skew_z;
    j["sd_defined"] = report.sd_defined ? 1 : 0;
    j["ks_distance"] = report.ks;
    j["ks_valid"] = report.ks_valid ? 1 : 0;
    j["ci_coverage"] = report.ci_coverage;
    j["omega_fraction"] = report.omega_fraction;
    j["mean_p_hat"] = report.mean_p_hat;
    j["sd_p_hat"] = report.sd_p_hat;
    j["frac_p_hat_below_0_1"] = report.frac_p_below_01;
    j["frac_p_hat_above_0_9"] = report.frac_p_above_09;
    j["v_star"] = report.v_star;
    j["runtime_sec"] = report.runtime_sec;
    if (!report.scaling.empty()) j["mean_sq_err_ell_bar"] = report.scaling.front().mean_sq_err;

    // Keep the map strictly numeric: degenerate statistics (NaN) are dropped,
    // their *_valid / *_defined flags say why.
    for (auto it = j.begin(); it != j.end();) {
        if (it->is_number_float() && !std::isfinite(it->get<double>()))
            it = j.erase(it);
        else
            ++it;
    }
    atomic_write(path, j.dump(2) + "\n");
}

void write_scaling_csv(const MCReport& report, const std::string& path) {
    std::string body = "N,K,replicates,mean_sq_err\n";
    for (const auto& row : report.scaling)
        body += std::to_string(row.N) + "," + std::to_string(row.K) + "," +
                std::to_string(row.replicates) + "," + format_double(row.mean_sq_err) + "\n";
    atomic_write(path, body);
}

} // namespace erhawkes
