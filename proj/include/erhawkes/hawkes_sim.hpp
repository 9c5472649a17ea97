#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erhawkes/kernels.hpp"
#include "erhawkes/random_graph.hpp"

namespace erhawkes {

// Per-process sorted jump times over (0, horizon]. The counting function
// Z_t(i) = #{s in events[i] : s <= t} is what every estimator reads.
struct EventLog {
    int n = 0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> events;

    std::size_t total_count() const {
        std::size_t c = 0;
        for (const auto& e : events) c += e.size();
        return c;
    }

    // #events of process i in (0, t].
    std::size_t count_at(int i, double t) const;
};

struct SimOptions {
    std::uint64_t max_events = 100000000; // hard explosion cap
    // automatic: Markovian state for the exponential kernel, sliding window
    // for the indicator kernel. generic: full-history intensity evaluation,
    // usable with any non-increasing kernel; intended for cross-checks.
    enum class Path { automatic, generic } path = Path::automatic;
};

// Exact sample of the system over [0, horizon] by thinning with the
// left-limit total intensity as the dominating rate (valid because every
// kernel variant is non-increasing). Deterministic in (adj, params,
// horizon, seed).
EventLog simulate(const Adjacency& adj, const ModelParams& params, double horizon,
                  std::uint64_t seed, const SimOptions& options = {});

// Independent immigration-birth sampler of the same law, used as a
// cross-validation oracle at small N. Poisson(mu) immigrants per process;
// an event at j spawns offspring on each influenced i at rate phi(.)/N.
// Requires N <= 32 and subcritical row/column degrees.
EventLog simulate_cluster_oracle(const Adjacency& adj, const ModelParams& params,
                                 double horizon, std::uint64_t seed,
                                 const SimOptions& options = {});

// Conditional expectation E_theta[Z_t] per process, evaluated through the
// convolution series of phi with matrix powers of A_N on a uniform grid.
// grid_step must be <= t/100. Truncated once a term's contribution falls
// below 1e-10 * mu * t; more than 1e4 terms raises SeriesFailure.
std::vector<double> expected_counts(const Adjacency& adj, const ModelParams& params,
                                    double t, double grid_step);

// CSV with header "process,time", rows sorted by time then process, times
// printed with 17 significant digits so loading is bit-exact.
void write_events_csv(const EventLog& log, const std::string& path);
EventLog read_events_csv(const std::string& path, int n, double horizon);

} // namespace erhawkes
