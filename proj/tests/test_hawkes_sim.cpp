#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "erhawkes/errors.hpp"
#include "erhawkes/hawkes_sim.hpp"
#include "erhawkes/rng.hpp"
#include "erhawkes/stats.hpp"

using namespace erhawkes;

namespace {

const ModelParams kHalf{1.0, 0.5, Kernel::exponential(0.5, 1.0), 7};

double mean_count(const std::vector<double>& counts) {
    double s = 0.0;
    for (double c : counts) s += c;
    return s / static_cast<double>(counts.size());
}

} // namespace

TEST_CASE("zero kernel is Poisson") {
    const auto adj = Adjacency::sample(50, 0.0, 4);
    const ModelParams params{1.0, 0.0, Kernel::zero(), 7};
    std::size_t total = 0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r)
        total += simulate(adj, params, 100.0, mix_seed(40, r)).total_count();
    const double expected = 50.0 * 100.0 * reps;
    const double rate = static_cast<double>(total) / expected;
    CHECK(std::abs(rate - 1.0) <= 3.0 / std::sqrt(expected));
}

TEST_CASE("single-process stationary rate") {
    const auto adj = Adjacency::sample(1, 1.0, 1);
    const ModelParams params{1.0, 1.0, Kernel::exponential(0.5, 1.0), 7};
    const auto log = simulate(adj, params, 2000.0, 42);
    const double rate = static_cast<double>(log.total_count()) / 2000.0;
    CHECK(std::abs(rate - 2.0) <= 0.2); // mu / (1 - Lambda) = 2
}

TEST_CASE("determinism") {
    const auto adj = Adjacency::sample(20, 0.5, 8);
    const auto a = simulate(adj, kHalf, 200.0, 77);
    const auto b = simulate(adj, kHalf, 200.0, 77);
    REQUIRE(a.total_count() == b.total_count());
    for (int i = 0; i < 20; ++i) CHECK(a.events[i] == b.events[i]);
}

TEST_CASE("event times are strictly increasing and within the horizon") {
    const auto adj = Adjacency::sample(10, 0.6, 5);
    const auto log = simulate(adj, kHalf, 300.0, 3);
    for (const auto& ev : log.events)
        for (std::size_t k = 0; k < ev.size(); ++k) {
            CHECK(ev[k] > 0.0);
            CHECK(ev[k] <= 300.0);
            if (k > 0) CHECK(ev[k] > ev[k - 1]);
        }
}

TEST_CASE("explosion cap aborts") {
    const auto adj = Adjacency::sample(8, 1.0, 2);
    const ModelParams params{1.0, 1.0, Kernel::exponential(2.0, 1.0), 7}; // Lambda p = 2
    SimOptions opt;
    opt.max_events = 2000;
    CHECK_THROWS_AS(simulate(adj, params, 1e9, 5, opt), ExplosionAbort);
}

TEST_CASE("no baseline and no history yields an empty log") {
    const auto adj = Adjacency::sample(5, 0.5, 2);
    const ModelParams params{0.0, 0.5, Kernel::exponential(0.5, 1.0), 7};
    CHECK(simulate(adj, params, 100.0, 1).total_count() == 0);
}

TEST_CASE("cluster oracle: zero kernel gives Poisson immigrants") {
    const auto adj = Adjacency::sample(4, 0.5, 9);
    const ModelParams params{2.0, 0.5, Kernel::zero(), 7};
    double total = 0.0;
    const int reps = 50;
    for (int r = 0; r < reps; ++r)
        total += static_cast<double>(
            simulate_cluster_oracle(adj, params, 50.0, mix_seed(70, r)).total_count());
    const double expected = 4 * 2.0 * 50.0 * reps; // N mu horizon reps
    CHECK(std::abs(total / expected - 1.0) <= 3.0 / std::sqrt(expected));
}

TEST_CASE("cluster oracle: single-process mean rate") {
    const auto adj = Adjacency::sample(1, 1.0, 1);
    const ModelParams params{1.0, 1.0, Kernel::exponential(0.5, 1.0), 7};
    std::vector<double> counts;
    for (int r = 0; r < 200; ++r)
        counts.push_back(static_cast<double>(
            simulate_cluster_oracle(adj, params, 50.0, mix_seed(71, r)).total_count()));
    const auto s = stats::summarize(counts);
    // mean count / horizon -> mu / (1 - Lambda) = 2
    CHECK(std::abs(s.mean / 50.0 - 2.0) <= 3.0 * s.sd / (50.0 * std::sqrt(200.0)) + 0.05);
}

TEST_CASE("cluster oracle preconditions") {
    const auto big = Adjacency::sample(40, 0.5, 3);
    CHECK_THROWS_AS(simulate_cluster_oracle(big, kHalf, 10.0, 1), OracleDomainError);

    const auto ones = Adjacency::sample(4, 1.0, 3);
    const ModelParams hot{1.0, 1.0, Kernel::exponential(1.5, 1.0), 7};
    CHECK_THROWS_AS(simulate_cluster_oracle(ones, hot, 10.0, 1), OracleDomainError);
}

TEST_CASE("thinning and cluster sampler agree") {
    const auto adj = Adjacency::sample(4, 0.5, 12);
    const ModelParams params{1.0, 0.5, Kernel::exponential(0.4, 1.0), 7};
    const int reps = 120;
    std::vector<double> thin, cluster;
    for (int r = 0; r < reps; ++r) {
        thin.push_back(static_cast<double>(
            simulate(adj, params, 100.0, mix_seed(81, r)).total_count()));
        cluster.push_back(static_cast<double>(
            simulate_cluster_oracle(adj, params, 100.0, mix_seed(82, r)).total_count()));
    }
    const auto a = stats::summarize(thin), b = stats::summarize(cluster);
    const double z = (a.mean - b.mean) /
                     std::sqrt(a.sd * a.sd / reps + b.sd * b.sd / reps);
    CHECK(std::abs(z) < 4.0);
}

TEST_CASE("markov and generic paths are statistically indistinguishable") {
    const auto adj = Adjacency::sample(20, 0.5, 33);
    const ModelParams params{1.0, 0.5, Kernel::exponential(0.5, 1.0), 7};
    SimOptions generic;
    generic.path = SimOptions::Path::generic;
    const int reps = 200;
    std::vector<double> fast, slow;
    for (int r = 0; r < reps; ++r) {
        fast.push_back(static_cast<double>(
            simulate(adj, params, 100.0, mix_seed(91, r)).total_count()));
        slow.push_back(static_cast<double>(
            simulate(adj, params, 100.0, mix_seed(92, r), generic).total_count()));
    }
    const auto a = stats::summarize(fast), b = stats::summarize(slow);
    const double z = (a.mean - b.mean) /
                     std::sqrt(a.sd * a.sd / reps + b.sd * b.sd / reps);
    CHECK(std::abs(z) < 3.0);
}

TEST_CASE("window and generic paths agree for the indicator kernel") {
    const auto adj = Adjacency::sample(12, 0.5, 14);
    const ModelParams params{1.0, 0.5, Kernel::indicator(0.3, 1.5), 7};
    SimOptions generic;
    generic.path = SimOptions::Path::generic;
    const int reps = 150;
    std::vector<double> fast, slow;
    for (int r = 0; r < reps; ++r) {
        fast.push_back(static_cast<double>(
            simulate(adj, params, 150.0, mix_seed(95, r)).total_count()));
        slow.push_back(static_cast<double>(
            simulate(adj, params, 150.0, mix_seed(96, r), generic).total_count()));
    }
    const auto a = stats::summarize(fast), b = stats::summarize(slow);
    const double z = (a.mean - b.mean) /
                     std::sqrt(a.sd * a.sd / reps + b.sd * b.sd / reps);
    CHECK(std::abs(z) < 3.0);
}

TEST_CASE("expected counts: empty graph is the pure baseline") {
    const auto adj = Adjacency::sample(5, 0.0, 1);
    const ModelParams params{1.5, 0.0, Kernel::exponential(0.5, 1.0), 7};
    const auto counts = expected_counts(adj, params, 20.0, 0.1);
    for (double c : counts) CHECK(c == doctest::Approx(1.5 * 20.0).epsilon(1e-12));
}

TEST_CASE("expected counts grow with t") {
    const auto adj = Adjacency::sample(6, 0.5, 44);
    const auto lo = expected_counts(adj, kHalf, 10.0, 0.05);
    const auto hi = expected_counts(adj, kHalf, 15.0, 0.05);
    for (int i = 0; i < 6; ++i) CHECK(hi[i] >= lo[i]);
}

TEST_CASE("expected counts match the cluster-oracle mean") {
    const auto adj = Adjacency::sample(2, 1.0, 6);
    const ModelParams params{1.0, 1.0, Kernel::indicator(0.2, 2.0), 7};
    const double t = 30.0;
    const auto analytic = expected_counts(adj, params, t, 0.02);

    const int reps = 400;
    std::vector<double> counts;
    for (int r = 0; r < reps; ++r) {
        const auto log = simulate_cluster_oracle(adj, params, t, mix_seed(60, r));
        counts.push_back(static_cast<double>(log.count_at(0, t) + log.count_at(1, t)) / 2.0);
    }
    const auto s = stats::summarize(counts);
    const double predicted = (analytic[0] + analytic[1]) / 2.0;
    CHECK(std::abs(s.mean - predicted) <= 3.0 * s.sd / std::sqrt(reps) + 0.02 * predicted);
}

TEST_CASE("events CSV round-trips bit-exactly") {
    const auto adj = Adjacency::sample(6, 0.5, 10);
    const auto log = simulate(adj, kHalf, 50.0, 11);
    const std::string path = "events_roundtrip_test.csv";
    write_events_csv(log, path);
    const auto back = read_events_csv(path, 6, 50.0);
    for (int i = 0; i < 6; ++i) CHECK(back.events[i] == log.events[i]);
    std::remove(path.c_str());
}

TEST_CASE("malformed CSV reports the line") {
    const std::string path = "events_malformed_test.csv";
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("process,time\n0,1.5\nbroken line\n", f);
    std::fclose(f);
    try {
        read_events_csv(path, 2, 10.0);
        CHECK(false);
    } catch (const ConfigError& ex) {
        CHECK(std::string(ex.what()).find(":3") != std::string::npos);
    }
    std::remove(path.c_str());
}
