#include "erhawkes/hawkes_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "erhawkes/errors.hpp"
#include "erhawkes/rng.hpp"

namespace erhawkes {

std::size_t EventLog::count_at(int i, double t) const {
    const auto& e = events[i];
    return static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), t) - e.begin());
}

namespace {

// Excitation state contract used by the thinning loop below:
//   advance_to(t)   move the internal reference time forward to t
//   total()         sum of excitations at the reference time
//   on_event(j, t)  event at process j at the reference time t
//   pick(excess)    process index selected with weight e_i, given a target
//                   uniform draw in [0, total())
struct ZeroState {
    void advance_to(double) {}
    double total() const { return 0.0; }
    void on_event(int, double) {}
    int pick(double) const { return 0; }
};

// Exponential kernel: e_i(t) = w_i * scale(t), every excitation decays at
// the common rate beta, so one global scale factor carries the decay and
// per-process weights change only at events.
struct ExponentialState {
    double beta, add;
    double scale = 1.0, ref_time = 0.0, total_weight = 0.0;
    std::vector<double> weights;
    const std::vector<std::vector<std::int32_t>>* influencees;

    ExponentialState(int n, double alpha, double beta_in,
                     const std::vector<std::vector<std::int32_t>>* cols)
        : beta(beta_in), add(alpha / n), weights(n, 0.0), influencees(cols) {}

    void advance_to(double t) {
        if (t == ref_time) return;
        scale *= std::exp(-beta * (t - ref_time));
        ref_time = t;
        if (scale < 1e-250) {
            double w = 0.0;
            for (auto& x : weights) {
                x *= scale;
                w += x;
            }
            total_weight = w;
            scale = 1.0;
        }
    }

    double total() const { return total_weight * scale; }

    void on_event(int j, double) {
        const double unscaled = add / scale;
        for (std::int32_t k : (*influencees)[j]) weights[k] += unscaled;
        total_weight += unscaled * static_cast<double>((*influencees)[j].size());
    }

    int pick(double excess) const {
        const double target = excess / scale;
        double acc = 0.0;
        int last = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] > 0.0) {
                acc += weights[i];
                last = static_cast<int>(i);
                if (acc >= target) return last;
            }
        }
        return last;
    }
};

// Indicator kernel: each event contributes height/N to its influencees for
// exactly `width` time units; a FIFO of expiry times keeps counts exact.
struct IndicatorState {
    double unit, width;
    double active_total = 0.0;
    std::vector<std::uint32_t> counts;
    std::deque<std::pair<double, int>> expiries;
    const std::vector<std::vector<std::int32_t>>* influencees;

    IndicatorState(int n, double height, double width_in,
                   const std::vector<std::vector<std::int32_t>>* cols)
        : unit(height / n), width(width_in), counts(n, 0), influencees(cols) {}

    void advance_to(double t) {
        while (!expiries.empty() && expiries.front().first < t) {
            int j = expiries.front().second;
            expiries.pop_front();
            for (std::int32_t k : (*influencees)[j]) --counts[k];
            active_total -= unit * static_cast<double>((*influencees)[j].size());
        }
    }

    double total() const { return active_total; }

    void on_event(int j, double t) {
        for (std::int32_t k : (*influencees)[j]) ++counts[k];
        active_total += unit * static_cast<double>((*influencees)[j].size());
        expiries.emplace_back(t + width, j);
    }

    int pick(double excess) const {
        const double target = excess / unit;
        double acc = 0.0;
        int last = 0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (counts[i] > 0) {
                acc += static_cast<double>(counts[i]);
                last = static_cast<int>(i);
                if (acc >= target) return last;
            }
        }
        return last;
    }
};

// Full-history evaluation: excitation of i is (1/N) sum_j theta_ij G_j(t)
// with G_j(t) = sum over recent events of j of phi(t - s). Events older
// than the kernel's numerical support are skipped via per-process cursors
// (time only moves forward). O(active events) per candidate.
struct GenericState {
    const Kernel* kernel;
    double inv_n, cutoff;
    const std::vector<std::vector<double>>* history;
    const std::vector<std::uint32_t>* col_sums;
    const std::vector<std::vector<std::int32_t>>* influencees;
    std::vector<std::size_t> cursor;
    std::vector<double> g; // per-source kernel sums at the reference time
    double ref_time = 0.0;

    GenericState(int n, const Kernel* k, const std::vector<std::vector<double>>* hist,
                 const std::vector<std::uint32_t>* cols,
                 const std::vector<std::vector<std::int32_t>>* lists)
        : kernel(k), inv_n(1.0 / n), history(hist), col_sums(cols), influencees(lists),
          cursor(n, 0), g(n, 0.0) {
        cutoff = kernel->support_bound(1e-16 * std::max(1.0, kernel->eval(0.0)));
    }

    void advance_to(double t) {
        if (t == ref_time) return;
        ref_time = t;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const auto& ev = (*history)[j];
            std::size_t c = cursor[j];
            while (c < ev.size() && t - ev[c] > cutoff) ++c;
            cursor[j] = c;
            double sum = 0.0;
            for (std::size_t k = c; k < ev.size(); ++k) sum += kernel->eval(t - ev[k]);
            g[j] = sum;
        }
    }

    double total() const {
        double s = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            s += static_cast<double>((*col_sums)[j]) * g[j];
        return s * inv_n;
    }

    void on_event(int j, double) { g[j] += kernel->eval(0.0); }

    int pick(double excess) const {
        std::vector<double> lam(g.size(), 0.0);
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (g[j] <= 0.0) continue;
            const double contrib = g[j] * inv_n;
            for (std::int32_t k : (*influencees)[j]) lam[k] += contrib;
        }
        double acc = 0.0;
        int last = 0;
        for (std::size_t i = 0; i < lam.size(); ++i) {
            if (lam[i] > 0.0) {
                acc += lam[i];
                last = static_cast<int>(i);
                if (acc >= excess) return last;
            }
        }
        return last;
    }
};

template <class State>
void run_thinning(State& state, int n, double mu, double horizon, Xoshiro256pp& rng,
                  std::vector<std::vector<double>>& events, std::uint64_t max_events) {
    const double baseline_total = mu * static_cast<double>(n);
    double now = 0.0;
    std::uint64_t count = 0;
    while (true) {
        state.advance_to(now);
        const double bound = baseline_total + state.total();
        if (!(bound > 0.0)) break;

        double u = rng.uniform01();
        while (u <= 0.0) u = rng.uniform01();
        const double t_cand = now + (-std::log(u) / bound);
        if (t_cand > horizon) break;

        state.advance_to(t_cand);
        const double intensity = baseline_total + state.total();
        if (intensity > bound * (1.0 + 1e-9))
            throw std::logic_error("thinning: candidate intensity exceeds the dominating rate");

        if (rng.uniform01() * bound <= intensity) {
            const double v = rng.uniform01() * intensity;
            int i;
            if (v < baseline_total)
                i = std::min(n - 1, static_cast<int>(v / mu));
            else
                i = state.pick(v - baseline_total);
            events[i].push_back(t_cand);
            state.on_event(i, t_cand);
            if (++count > max_events)
                throw ExplosionAbort("simulate: event count exceeded cap of " +
                                     std::to_string(max_events));
        }
        now = t_cand;
    }
}

} // namespace

EventLog simulate(const Adjacency& adj, const ModelParams& params, double horizon,
                  std::uint64_t seed, const SimOptions& options) {
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate: horizon must be > 0");
    if (!(params.mu >= 0.0)) throw std::invalid_argument("simulate: mu must be >= 0");

    const int n = adj.n();
    EventLog log;
    log.n = n;
    log.horizon = horizon;
    log.seed = seed;
    log.events.assign(n, {});

    Xoshiro256pp rng(seed);
    const auto cols = adj.influence_lists();
    const Kernel& k = params.kernel;

    if (options.path == SimOptions::Path::generic && k.type() != KernelType::zero) {
        GenericState state(n, &k, &log.events, &adj.col_sums(), &cols);
        run_thinning(state, n, params.mu, horizon, rng, log.events, options.max_events);
        return log;
    }

    switch (k.type()) {
        case KernelType::zero: {
            ZeroState state;
            run_thinning(state, n, params.mu, horizon, rng, log.events, options.max_events);
            break;
        }
        case KernelType::exponential: {
            ExponentialState state(n, k.alpha(), k.beta(), &cols);
            run_thinning(state, n, params.mu, horizon, rng, log.events, options.max_events);
            break;
        }
        case KernelType::indicator: {
            IndicatorState state(n, k.height(), k.width(), &cols);
            run_thinning(state, n, params.mu, horizon, rng, log.events, options.max_events);
            break;
        }
    }
    return log;
}

EventLog simulate_cluster_oracle(const Adjacency& adj, const ModelParams& params,
                                 double horizon, std::uint64_t seed,
                                 const SimOptions& options) {
    const int n = adj.n();
    if (n > 32) throw OracleDomainError("cluster oracle: requires N <= 32");
    if (!(horizon > 0.0)) throw std::invalid_argument("cluster oracle: horizon must be > 0");

    const double lambda = params.kernel.total_mass();
    std::uint32_t max_deg = 0;
    for (int i = 0; i < n; ++i)
        max_deg = std::max({max_deg, adj.row_sum(i), adj.col_sum(i)});
    if (!(lambda * max_deg / static_cast<double>(n) < 1.0)) {
        std::ostringstream msg;
        msg << "cluster oracle: Lambda * max degree / N = "
            << lambda * max_deg / static_cast<double>(n) << " >= 1";
        throw OracleDomainError(msg.str());
    }

    EventLog log;
    log.n = n;
    log.horizon = horizon;
    log.seed = seed;
    log.events.assign(n, {});

    Xoshiro256pp rng(seed);
    const auto cols = adj.influence_lists();
    const Kernel& k = params.kernel;
    const double child_mean = lambda / static_cast<double>(n);

    std::deque<std::pair<int, double>> queue;
    std::uint64_t count = 0;
    for (int i = 0; i < n; ++i) {
        const long m = rng.poisson(params.mu * horizon);
        for (long r = 0; r < m; ++r) {
            const double t = rng.uniform01() * horizon;
            log.events[i].push_back(t);
            queue.emplace_back(i, t);
            ++count;
        }
    }

    while (!queue.empty()) {
        const auto [j, t_parent] = queue.front();
        queue.pop_front();
        for (std::int32_t child : cols[j]) {
            const long m = rng.poisson(child_mean);
            for (long r = 0; r < m; ++r) {
                double age;
                switch (k.type()) {
                    case KernelType::exponential: age = rng.exponential(k.beta()); break;
                    case KernelType::indicator: age = rng.uniform01() * k.width(); break;
                    default: age = std::numeric_limits<double>::infinity(); break;
                }
                const double t_child = t_parent + age;
                if (t_child <= horizon) {
                    log.events[child].push_back(t_child);
                    queue.emplace_back(child, t_child);
                    if (++count > options.max_events)
                        throw ExplosionAbort("cluster oracle: event count exceeded cap");
                }
            }
        }
    }

    for (auto& e : log.events) std::sort(e.begin(), e.end());
    return log;
}

std::vector<double> expected_counts(const Adjacency& adj, const ModelParams& params,
                                    double t, double grid_step) {
    const int n = adj.n();
    if (!(t > 0.0)) throw std::invalid_argument("expected_counts: t must be > 0");
    if (!(grid_step > 0.0 && grid_step <= t / 100.0))
        throw std::invalid_argument("expected_counts: grid must satisfy 0 < grid <= t/100");

    const double lambda = params.kernel.total_mass();
    std::uint32_t max_row = 0;
    for (int i = 0; i < n; ++i) max_row = std::max(max_row, adj.row_sum(i));
    if (!(lambda * max_row / static_cast<double>(n) < 1.0))
        throw SpectralFailure("expected_counts: Lambda * |||A|||_inf >= 1");

    const int grid_n = static_cast<int>(std::ceil(t / grid_step - 1e-9));
    const double h = t / grid_n;

    // phi sampled on the grid; weights are trapezoid endpoints.
    std::vector<double> phi1(grid_n + 1), conv(grid_n + 1), next(grid_n + 1);
    for (int g = 0; g <= grid_n; ++g) phi1[g] = params.kernel.eval(g * h);
    conv = phi1;

    auto time_weight = [&](const std::vector<double>& f) {
        double acc = 0.0;
        for (int g = 0; g <= grid_n; ++g) {
            const double w = (g == 0 || g == grid_n) ? 0.5 : 1.0;
            acc += w * (t - g * h) * f[g];
        }
        return acc * h;
    };

    std::vector<double> result(n, params.mu * t); // n = 0 term
    std::vector<double> vec(n, 1.0), vec_next(n);
    const double tol = 1e-10 * params.mu * t;

    for (int term = 1;; ++term) {
        if (term > 10000)
            throw SeriesFailure("expected_counts: series did not converge within 1e4 terms");

        // vec <- A vec
        for (int i = 0; i < n; ++i) {
            const std::uint64_t* row = adj.row_words(i);
            double acc = 0.0;
            for (std::size_t w = 0; w < adj.words_per_row(); ++w) {
                std::uint64_t word = row[w];
                while (word) {
                    acc += vec[w * 64 + static_cast<std::size_t>(std::countr_zero(word))];
                    word &= word - 1;
                }
            }
            vec_next[i] = acc / static_cast<double>(n);
        }
        vec.swap(vec_next);

        const double g_n = time_weight(conv);
        double vmax = 0.0;
        for (int i = 0; i < n; ++i) vmax = std::max(vmax, vec[i]);
        for (int i = 0; i < n; ++i) result[i] += params.mu * g_n * vec[i];
        if (params.mu * g_n * vmax < tol) break;

        // conv <- conv * phi1 (trapezoid discrete convolution)
        for (int g = 0; g <= grid_n; ++g) {
            double acc = 0.0;
            for (int m = 0; m <= g; ++m) {
                const double w = (m == 0 || m == g) ? 0.5 : 1.0;
                acc += w * conv[m] * phi1[g - m];
            }
            next[g] = acc * h;
        }
        conv.swap(next);
    }
    return result;
}

void write_events_csv(const EventLog& log, const std::string& path) {
    std::vector<std::pair<double, int>> rows;
    rows.reserve(log.total_count());
    for (int i = 0; i < log.n; ++i)
        for (double t : log.events[i]) rows.emplace_back(t, i);
    std::sort(rows.begin(), rows.end());

    const std::string tmp = path + ".tmp";
    {
        std::FILE* f = std::fopen(tmp.c_str(), "w");
        if (!f) throw ConfigError("cannot open for writing: " + tmp);
        std::fputs("process,time\n", f);
        for (const auto& [t, i] : rows) std::fprintf(f, "%d,%.17g\n", i, t);
        if (std::fclose(f) != 0) throw ConfigError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ConfigError("rename failed: " + path);
}

EventLog read_events_csv(const std::string& path, int n, double horizon) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path);

    EventLog log;
    log.n = n;
    log.horizon = horizon;
    log.events.assign(n, {});

    std::string line;
    long line_no = 1;
    if (!std::getline(in, line) || line != "process,time")
        throw ConfigError(path + ":1: expected header \"process,time\"");
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        std::size_t pos = 0;
        int proc = -1;
        double t = 0.0;
        try {
            if (comma == std::string::npos) throw std::invalid_argument("no comma");
            proc = std::stoi(line.substr(0, comma), &pos);
            t = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed row");
        }
        if (proc < 0 || proc >= n)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": process out of range");
        log.events[proc].push_back(t);
    }
    for (int i = 0; i < n; ++i)
        if (!std::is_sorted(log.events[i].begin(), log.events[i].end()))
            throw ConfigError(path + ": events of process " + std::to_string(i) +
                              " are not sorted in time");
    return log;
}

} // namespace erhawkes
