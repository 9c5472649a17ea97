// Command-line front end: graph sampling, simulation, estimation and Monte
// Carlo experiments, driven by a flat key=value (or flat JSON) config file.
//
// Exit codes: 0 ok, 2 config/input error, 3 explosion abort, 4 enabled
// acceptance check failed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "erhawkes/asymptotics.hpp"
#include "erhawkes/errors.hpp"
#include "erhawkes/estimators.hpp"
#include "erhawkes/hawkes_sim.hpp"
#include "erhawkes/matrix_oracle.hpp"
#include "erhawkes/mc_harness.hpp"
#include "erhawkes/random_graph.hpp"
#include "erhawkes/rng.hpp"

namespace {

using erhawkes::ConfigError;

enum class KeyType { real, integer, unsigned64, text };

struct KeySpec {
    const char* name;
    KeyType type;
    const char* range;
    const char* commands; // which subcommands read it
    const char* help;
};

// Every recognized config key with its validated range. --help prints this
// table; unknown keys are rejected.
const std::vector<KeySpec>& key_specs() {
    static const std::vector<KeySpec> specs = {
        {"kernel", KeyType::text, "exponential|indicator|zero", "simulate,estimate,mc,graph-oracle",
         "memory kernel family"},
        {"kernel_alpha", KeyType::real, "(0,inf)", "simulate,mc,graph-oracle",
         "exponential kernel: phi(t)=alpha*exp(-beta t)"},
        {"kernel_beta", KeyType::real, "(0,inf)", "simulate,mc,graph-oracle",
         "exponential kernel decay rate"},
        {"kernel_height", KeyType::real, "[0,inf)", "simulate,mc,graph-oracle",
         "indicator kernel height"},
        {"kernel_width", KeyType::real, "(0,inf)", "simulate,mc,graph-oracle",
         "indicator kernel support width"},
        {"mu", KeyType::real, "(0,inf)", "simulate,mc,graph-oracle", "baseline event rate"},
        {"p", KeyType::real, "[0,1]", "simulate,mc,graph-oracle", "connection probability"},
        {"N", KeyType::integer, "[1,10000000]", "simulate,estimate,mc,graph-oracle",
         "population size"},
        {"K", KeyType::integer, "[1,N]", "estimate,mc,graph-oracle",
         "observed processes (default N)"},
        {"t", KeyType::real, "[1,inf)", "estimate,mc", "estimation time; the log covers (0,2t]"},
        {"q", KeyType::integer, "[4,170]", "estimate,mc", "moment index for the block schedule"},
        {"horizon", KeyType::real, "(0,inf)", "simulate", "simulation end time"},
        {"replicates", KeyType::integer, "[1,100000000]", "mc", "Monte Carlo replicates"},
        {"master_seed", KeyType::unsigned64, "[0,2^64)", "simulate,mc,graph-oracle",
         "single source of all randomness"},
        {"mode", KeyType::text, "full|matrix_only|p_zero", "mc", "experiment mode"},
        {"alpha", KeyType::real, "(0,1]", "estimate,mc", "confidence level for the interval"},
        {"output_dir", KeyType::text, "path", "simulate,estimate,mc,graph-oracle",
         "directory for output files"},
        {"events_file", KeyType::text, "path", "estimate", "input events CSV"},
        {"workers", KeyType::integer, "[0,1024]", "mc", "worker threads; 0 = available cores"},
        {"separation_threshold", KeyType::real, "(1,inf)", "estimate,mc",
         "rate-term dominance factor"},
        {"scaling_levels", KeyType::integer, "[1,8]", "mc",
         "matrix mode: also run (2^l N, 2^l K) for l < levels"},
        {"max_events", KeyType::unsigned64, "[1,2^63)", "simulate,mc", "explosion cap"},
        {"check_sd_ratio_lo", KeyType::real, "(0,inf)", "mc",
         "fail unless sd_z/theoretical_sd >= value"},
        {"check_sd_ratio_hi", KeyType::real, "(0,inf)", "mc",
         "fail unless sd_z/theoretical_sd <= value"},
        {"check_ks_max", KeyType::real, "(0,1]", "mc", "fail unless ks_distance <= value"},
        {"check_coverage_min", KeyType::real, "[0,1]", "mc", "fail unless ci_coverage >= value"},
        {"check_frac_below_min", KeyType::real, "[0,1]", "mc",
         "fail unless fraction(p_hat<0.1) >= value"},
        {"check_frac_above_lo", KeyType::real, "[0,1]", "mc",
         "fail unless fraction(p_hat>0.9) >= value"},
        {"check_frac_above_hi", KeyType::real, "[0,1]", "mc",
         "fail unless fraction(p_hat>0.9) <= value"},
        {"check_omega_min", KeyType::real, "[0,1]", "mc", "fail unless omega_fraction >= value"},
        {"check_scaling_ratio_lo", KeyType::real, "(0,inf)", "mc",
         "matrix mode, levels>=2: fail unless mse(level 0)/mse(level 1) >= value"},
        {"check_scaling_ratio_hi", KeyType::real, "(0,inf)", "mc",
         "matrix mode, levels>=2: fail unless mse(level 0)/mse(level 1) <= value"},
    };
    return specs;
}

const KeySpec* find_spec(const std::string& key) {
    for (const auto& s : key_specs())
        if (key == s.name) return &s;
    return nullptr;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Raw key -> value strings; conversion and range checks happen per key.
class Config {
  public:
    static Config load(const std::string& path) {
        Config cfg;
        std::filesystem::path p(path);
        if (p.extension() == ".json") {
            std::ifstream in(path);
            if (!in) throw ConfigError("cannot open config: " + path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const std::exception& ex) {
                throw ConfigError("config " + path + ": " + ex.what());
            }
            if (!j.is_object()) throw ConfigError("config " + path + ": expected a flat object");
            for (const auto& [key, value] : j.items()) {
                if (value.is_string())
                    cfg.values_[key] = value.get<std::string>();
                else if (value.is_number() || value.is_boolean())
                    cfg.values_[key] = value.dump();
                else
                    throw ConfigError("config key \"" + key + "\": unsupported value type");
            }
        } else {
            std::ifstream in(path);
            if (!in) throw ConfigError("cannot open config: " + path);
            std::string line;
            long line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                const std::string s = trim(line);
                if (s.empty() || s[0] == '#') continue;
                const auto eq = s.find('=');
                if (eq == std::string::npos)
                    throw ConfigError(path + ":" + std::to_string(line_no) +
                                      ": expected key=value");
                cfg.values_[trim(s.substr(0, eq))] = trim(s.substr(eq + 1));
            }
        }
        for (const auto& [key, value] : cfg.values_)
            if (!find_spec(key)) throw ConfigError("unknown config key \"" + key + "\"");
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    double get_real(const std::string& key, double lo, double hi, bool lo_open = false) const {
        const std::string& raw = raw_value(key);
        double v;
        std::size_t pos = 0;
        try {
            v = std::stod(raw, &pos);
        } catch (const std::exception&) {
            throw ConfigError("key \"" + key + "\": not a number: " + raw);
        }
        if (pos != raw.size()) throw ConfigError("key \"" + key + "\": not a number: " + raw);
        const bool ok = lo_open ? (v > lo && v <= hi) : (v >= lo && v <= hi);
        if (!ok || std::isnan(v))
            throw ConfigError("key \"" + key + "\" = " + raw + " out of range " +
                              find_spec(key)->range);
        return v;
    }

    long get_int(const std::string& key, long lo, long hi) const {
        const std::string& raw = raw_value(key);
        long v;
        std::size_t pos = 0;
        try {
            v = std::stol(raw, &pos);
        } catch (const std::exception&) {
            throw ConfigError("key \"" + key + "\": not an integer: " + raw);
        }
        if (pos != raw.size()) throw ConfigError("key \"" + key + "\": not an integer: " + raw);
        if (v < lo || v > hi)
            throw ConfigError("key \"" + key + "\" = " + raw + " out of range " +
                              find_spec(key)->range);
        return v;
    }

    std::uint64_t get_u64(const std::string& key) const {
        const std::string& raw = raw_value(key);
        try {
            std::size_t pos = 0;
            std::uint64_t v = std::stoull(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key \"" + key + "\": not an unsigned integer: " + raw);
        }
    }

    std::string get_text(const std::string& key) const { return raw_value(key); }

    template <class T, class Fn>
    T get_or(const std::string& key, T fallback, Fn getter) const {
        return has(key) ? getter() : fallback;
    }

  private:
    const std::string& raw_value(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError("missing required key \"" + key + "\"");
        return it->second;
    }

    std::map<std::string, std::string> values_;
};

erhawkes::Kernel parse_kernel(const Config& cfg) {
    const std::string kind = cfg.has("kernel") ? cfg.get_text("kernel") : "exponential";
    if (kind == "exponential")
        return erhawkes::Kernel::exponential(cfg.get_real("kernel_alpha", 0.0, 1e12, true),
                                             cfg.get_real("kernel_beta", 0.0, 1e12, true));
    if (kind == "indicator")
        return erhawkes::Kernel::indicator(cfg.get_real("kernel_height", 0.0, 1e12),
                                           cfg.get_real("kernel_width", 0.0, 1e12, true));
    if (kind == "zero") return erhawkes::Kernel::zero();
    throw ConfigError("key \"kernel\" = " + kind + " must be exponential|indicator|zero");
}

erhawkes::ModelParams parse_model(const Config& cfg) {
    erhawkes::ModelParams params{cfg.get_real("mu", 0.0, 1e12, true),
                                 cfg.get_real("p", 0.0, 1.0), parse_kernel(cfg),
                                 static_cast<int>(cfg.get_or("q", 7L, [&] {
                                     return cfg.get_int("q", 4, 170);
                                 }))};
    return params;
}

std::filesystem::path output_dir(const Config& cfg, const std::string& override_dir) {
    std::filesystem::path dir = !override_dir.empty()
                                    ? std::filesystem::path(override_dir)
                                    : std::filesystem::path(
                                          cfg.has("output_dir") ? cfg.get_text("output_dir") : ".");
    std::filesystem::create_directories(dir);
    return dir;
}

struct CheckResult {
    bool any_enabled = false;
    bool all_passed = true;
};

void run_check(CheckResult& result, const std::string& name, bool passed,
               const std::string& detail) {
    result.any_enabled = true;
    result.all_passed = result.all_passed && passed;
    std::cout << (passed ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
}

int cmd_simulate(const Config& cfg, const std::string& out_override) {
    const auto params = parse_model(cfg);
    const long n = cfg.get_int("N", 1, 10000000);
    const double horizon = cfg.get_real("horizon", 0.0, 1e15, true);
    const std::uint64_t seed = cfg.get_or("master_seed", std::uint64_t{1},
                                          [&] { return cfg.get_u64("master_seed"); });
    erhawkes::SimOptions opt;
    opt.max_events = cfg.get_or("max_events", std::uint64_t{100000000},
                                [&] { return cfg.get_u64("max_events"); });

    const auto adj = erhawkes::Adjacency::sample(static_cast<int>(n), params.p,
                                                 erhawkes::mix_seed(seed, 0));
    const auto log = erhawkes::simulate(adj, params, horizon, erhawkes::mix_seed(seed, 1), opt);
    const auto dir = output_dir(cfg, out_override);
    erhawkes::write_events_csv(log, (dir / "events.csv").string());
    std::cout << "wrote " << (dir / "events.csv").string() << " (" << log.total_count()
              << " events)\n";
    return 0;
}

int cmd_estimate(const Config& cfg, const std::string& out_override,
                 const std::string& events_override) {
    const long n = cfg.get_int("N", 1, 10000000);
    const int k = static_cast<int>(cfg.get_or("K", n, [&] { return cfg.get_int("K", 1, n); }));
    const double t = cfg.get_real("t", 1.0, 1e15);
    const int q = static_cast<int>(cfg.get_or("q", 7L, [&] { return cfg.get_int("q", 4, 170); }));
    const double alpha =
        cfg.get_or("alpha", 0.05, [&] { return cfg.get_real("alpha", 0.0, 1.0, true); });
    const double sep = cfg.get_or("separation_threshold", 5.0, [&] {
        return cfg.get_real("separation_threshold", 1.0, 1e6, true);
    });
    const std::string events_path =
        !events_override.empty() ? events_override : cfg.get_text("events_file");

    auto log = erhawkes::read_events_csv(events_path, static_cast<int>(n), 2.0 * t);
    double max_time = 0.0;
    for (const auto& ev : log.events)
        if (!ev.empty()) max_time = std::max(max_time, ev.back());
    log.horizon = std::max(2.0 * t, max_time);

    const auto est = erhawkes::estimate(erhawkes::EstimatorInput{log, n, k, t, q});
    const auto terms = erhawkes::rate_terms(n, k, t, q, sep);
    double half = 0.0;
    try {
        half = erhawkes::confidence_interval(est, n, k, t, terms.delta_t, terms.gamma, alpha);
    } catch (const erhawkes::DegenerateEstimate&) {
        half = 0.0;
    }

    // Theoretical spread of the scaled error in the dominant regime, with
    // the plug-in estimates standing in for the true parameters. Absent when
    // no regime separates or the plug-ins are degenerate.
    double theoretical_sd = -1.0, error_scale = -1.0;
    if (est.mu_hat > 0.0 && est.lambda_hat > 0.0 && est.p_hat > 0.0 &&
        est.lambda_hat * est.p_hat < 1.0) {
        try {
            const erhawkes::ModelParams plugin{
                est.mu_hat, est.p_hat,
                erhawkes::Kernel::exponential(est.lambda_hat, 1.0), q};
            const auto law = erhawkes::theoretical_law(plugin, terms);
            theoretical_sd = std::sqrt(law.variance);
            error_scale = law.scale;
        } catch (const erhawkes::MixedRegime&) {
        }
    }

    nlohmann::json j;
    j["mu_hat"] = est.mu_hat;
    j["lambda_hat"] = est.lambda_hat;
    j["p_hat"] = est.p_hat;
    j["epsilon"] = est.raw.epsilon;
    j["V"] = est.raw.V;
    j["X"] = est.raw.X;
    j["Z_delta"] = est.raw.Z_delta;
    j["Z_2delta"] = est.raw.Z_2delta;
    j["W"] = est.raw.W;
    j["delta_t"] = est.raw.delta_t;
    j["r1"] = terms.r1;
    j["r2"] = terms.r2;
    j["r3"] = terms.r3;
    j["gamma"] = terms.gamma;
    j["separation"] = terms.separation;
    j["dominant_regime"] = erhawkes::to_string(terms.dominant);
    j["alpha"] = alpha;
    j["ci_half_width"] = half;
    if (theoretical_sd >= 0.0) {
        j["theoretical_sd"] = theoretical_sd;
        j["error_scale"] = error_scale;
    }
    j["N"] = n;
    j["K"] = k;
    j["t"] = t;
    j["q"] = q;

    const auto dir = output_dir(cfg, out_override);
    const auto path = dir / "estimate.json";
    const std::string tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << j.dump(2) << "\n";
        if (!out) throw ConfigError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

erhawkes::ExperimentConfig parse_experiment(const Config& cfg) {
    erhawkes::ExperimentConfig ec;
    ec.params = parse_model(cfg);
    ec.N = cfg.get_int("N", 1, 10000000);
    ec.K = static_cast<int>(cfg.get_or("K", ec.N, [&] { return cfg.get_int("K", 1, ec.N); }));
    ec.t = cfg.get_or("t", 1.0, [&] { return cfg.get_real("t", 1.0, 1e15); });
    ec.replicates = cfg.get_int("replicates", 1, 100000000);
    ec.master_seed = cfg.get_or("master_seed", std::uint64_t{1},
                                [&] { return cfg.get_u64("master_seed"); });
    const std::string mode = cfg.has("mode") ? cfg.get_text("mode") : "full";
    if (mode == "full")
        ec.mode = erhawkes::RunMode::full;
    else if (mode == "matrix_only")
        ec.mode = erhawkes::RunMode::matrix_only;
    else if (mode == "p_zero")
        ec.mode = erhawkes::RunMode::p_zero;
    else
        throw ConfigError("key \"mode\" = " + mode + " must be full|matrix_only|p_zero");
    ec.separation_threshold = cfg.get_or("separation_threshold", 5.0, [&] {
        return cfg.get_real("separation_threshold", 1.0, 1e6, true);
    });
    ec.alpha = cfg.get_or("alpha", 0.05, [&] { return cfg.get_real("alpha", 0.0, 1.0, true); });
    ec.workers =
        static_cast<int>(cfg.get_or("workers", 0L, [&] { return cfg.get_int("workers", 0, 1024); }));
    ec.max_events = cfg.get_or("max_events", std::uint64_t{100000000},
                               [&] { return cfg.get_u64("max_events"); });
    ec.scaling_levels = static_cast<int>(
        cfg.get_or("scaling_levels", 1L, [&] { return cfg.get_int("scaling_levels", 1, 8); }));
    if (ec.mode == erhawkes::RunMode::p_zero && ec.params.p != 0.0)
        throw ConfigError("mode p_zero requires p = 0 in the config");
    return ec;
}

int cmd_mc(const Config& cfg, const std::string& out_override) {
    const auto ec = parse_experiment(cfg);
    const auto report = ec.mode == erhawkes::RunMode::matrix_only
                            ? erhawkes::run_matrix_experiment(ec)
                            : erhawkes::run_experiment(ec);

    const auto dir = output_dir(cfg, out_override);
    erhawkes::write_replicates_csv(report, (dir / "replicates.csv").string());
    erhawkes::write_summary_json(report, (dir / "summary.json").string());
    if (!report.scaling.empty())
        erhawkes::write_scaling_csv(report, (dir / "scaling.csv").string());

    std::cout << "replicates " << report.config.replicates << ", excluded " << report.excluded
              << ", omega_fraction " << report.omega_fraction << ", runtime "
              << report.runtime_sec << " s\n";

    CheckResult checks;
    auto fmt = [](double x) {
        std::ostringstream os;
        os << x;
        return os.str();
    };
    if (cfg.has("check_sd_ratio_lo") || cfg.has("check_sd_ratio_hi")) {
        const double lo = cfg.get_or("check_sd_ratio_lo", 0.0, [&] {
            return cfg.get_real("check_sd_ratio_lo", 0.0, 1e9, true);
        });
        const double hi = cfg.get_or("check_sd_ratio_hi", 1e300, [&] {
            return cfg.get_real("check_sd_ratio_hi", 0.0, 1e9, true);
        });
        const double ratio = report.sd_z / report.theoretical_sd;
        run_check(checks, "sd_ratio", report.sd_defined && ratio >= lo && ratio <= hi,
                  "sd_z/theoretical_sd = " + fmt(ratio) + " target [" + fmt(lo) + "," + fmt(hi) +
                      "]");
    }
    if (cfg.has("check_ks_max")) {
        const double mx = cfg.get_real("check_ks_max", 0.0, 1.0, true);
        run_check(checks, "ks", report.ks_valid && report.ks <= mx,
                  "ks_distance = " + fmt(report.ks) + " target <= " + fmt(mx));
    }
    if (cfg.has("check_coverage_min")) {
        const double mn = cfg.get_real("check_coverage_min", 0.0, 1.0);
        run_check(checks, "coverage", report.ci_coverage >= mn,
                  "ci_coverage = " + fmt(report.ci_coverage) + " target >= " + fmt(mn));
    }
    if (cfg.has("check_frac_below_min")) {
        const double mn = cfg.get_real("check_frac_below_min", 0.0, 1.0);
        run_check(checks, "frac_p_below_0.1", report.frac_p_below_01 >= mn,
                  "fraction = " + fmt(report.frac_p_below_01) + " target >= " + fmt(mn));
    }
    if (cfg.has("check_frac_above_lo") || cfg.has("check_frac_above_hi")) {
        const double lo = cfg.get_or("check_frac_above_lo", 0.0,
                                     [&] { return cfg.get_real("check_frac_above_lo", 0.0, 1.0); });
        const double hi = cfg.get_or("check_frac_above_hi", 1.0,
                                     [&] { return cfg.get_real("check_frac_above_hi", 0.0, 1.0); });
        run_check(checks, "frac_p_above_0.9",
                  report.frac_p_above_09 >= lo && report.frac_p_above_09 <= hi,
                  "fraction = " + fmt(report.frac_p_above_09) + " target [" + fmt(lo) + "," +
                      fmt(hi) + "]");
    }
    if (cfg.has("check_omega_min")) {
        const double mn = cfg.get_real("check_omega_min", 0.0, 1.0);
        run_check(checks, "omega", report.omega_fraction >= mn,
                  "omega_fraction = " + fmt(report.omega_fraction) + " target >= " + fmt(mn));
    }
    if (cfg.has("check_scaling_ratio_lo") || cfg.has("check_scaling_ratio_hi")) {
        if (report.scaling.size() < 2)
            throw ConfigError("scaling ratio checks need mode=matrix_only and scaling_levels>=2");
        const double lo = cfg.get_or("check_scaling_ratio_lo", 0.0, [&] {
            return cfg.get_real("check_scaling_ratio_lo", 0.0, 1e9, true);
        });
        const double hi = cfg.get_or("check_scaling_ratio_hi", 1e300, [&] {
            return cfg.get_real("check_scaling_ratio_hi", 0.0, 1e9, true);
        });
        const double ratio = report.scaling[0].mean_sq_err / report.scaling[1].mean_sq_err;
        run_check(checks, "scaling_ratio", ratio >= lo && ratio <= hi,
                  "mse(N,K)/mse(2N,2K) = " + fmt(ratio) + " target [" + fmt(lo) + "," + fmt(hi) +
                      "]");
    }

    return checks.any_enabled && !checks.all_passed ? 4 : 0;
}

int cmd_graph_oracle(const Config& cfg, const std::string& out_override) {
    const auto params = parse_model(cfg);
    const long n = cfg.get_int("N", 1, 10000000);
    const int k = static_cast<int>(cfg.get_or("K", n, [&] { return cfg.get_int("K", 1, n); }));
    const std::uint64_t seed = cfg.get_or("master_seed", std::uint64_t{1},
                                          [&] { return cfg.get_u64("master_seed"); });

    const auto adj = erhawkes::Adjacency::sample(static_cast<int>(n), params.p,
                                                 erhawkes::mix_seed(seed, 0));
    const double lambda = params.kernel.total_mass();
    const auto flags = erhawkes::check_events(adj, lambda, k);
    const auto g = erhawkes::analyze_graph(adj, lambda, params.mu, k);
    const auto lt = erhawkes::limit_triple(params);

    const auto dir = output_dir(cfg, out_override);
    erhawkes::write_adjacency_text(adj, (dir / "theta.txt").string());

    nlohmann::json j;
    j["N"] = n;
    j["K"] = k;
    j["ell_bar_K"] = g.ell_bar_K;
    j["x_K_sq_norm"] = g.x_K_sq_norm;
    j["V_inf"] = g.V_inf;
    j["A_inf"] = g.A_inf;
    j["W_inf"] = g.W_inf;
    j["X_inf"] = g.X_inf;
    j["omega"] = flags.omega ? 1 : 0;
    j["a_event"] = flags.a_event ? 1 : 0;
    j["ell_bar_limit"] = erhawkes::ell_bar_limit(params);
    j["u_star"] = lt.u;
    j["v_star"] = lt.v;
    j["w_star"] = lt.w;

    const auto path = dir / "graph.json";
    const std::string tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << j.dump(2) << "\n";
        if (!out) throw ConfigError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
    std::cout << "wrote " << (dir / "theta.txt").string() << " and " << path.string() << "\n";
    return 0;
}

std::string key_table() {
    std::ostringstream os;
    os << "\nConfig keys (key=value lines, or a flat .json object):\n";
    for (const auto& s : key_specs()) {
        os << "  " << s.name;
        for (std::size_t i = std::string(s.name).size(); i < 24; ++i) os << ' ';
        os << s.range;
        for (std::size_t i = std::string(s.range).size(); i < 22; ++i) os << ' ';
        os << s.help << " [" << s.commands << "]\n";
    }
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and inference for a partially observed system of mean-field "
                 "Hawkes processes interacting through a Bernoulli(p) digraph"};
    app.footer(key_table());
    app.require_subcommand(1);

    std::string config_path, out_dir, events_path;

    auto* sim = app.add_subcommand("simulate", "sample a graph and simulate events.csv");
    sim->add_option("--config", config_path, "config file")->required();
    sim->add_option("--output-dir", out_dir, "override output_dir");

    auto* est = app.add_subcommand("estimate", "estimate (mu, Lambda, p) from an events CSV");
    est->add_option("--config", config_path, "config file")->required();
    est->add_option("--events", events_path, "events CSV (overrides events_file)");
    est->add_option("--output-dir", out_dir, "override output_dir");

    auto* mc = app.add_subcommand("mc", "replicated Monte Carlo experiment");
    mc->add_option("--config", config_path, "config file")->required();
    mc->add_option("--output-dir", out_dir, "override output_dir");

    auto* graph = app.add_subcommand("graph-oracle", "sample a graph and its limit quantities");
    graph->add_option("--config", config_path, "config file")->required();
    graph->add_option("--output-dir", out_dir, "override output_dir");

    CLI11_PARSE(app, argc, argv);

    try {
        const Config cfg = Config::load(config_path);
        if (sim->parsed()) return cmd_simulate(cfg, out_dir);
        if (est->parsed()) return cmd_estimate(cfg, out_dir, events_path);
        if (mc->parsed()) return cmd_mc(cfg, out_dir);
        if (graph->parsed()) return cmd_graph_oracle(cfg, out_dir);
        return 2;
    } catch (const erhawkes::ExplosionAbort& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    } catch (const ConfigError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
