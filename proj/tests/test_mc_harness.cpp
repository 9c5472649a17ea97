#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "erhawkes/matrix_oracle.hpp"
#include "erhawkes/mc_harness.hpp"
#include "erhawkes/rng.hpp"
#include "erhawkes/stats.hpp"

using namespace erhawkes;

namespace {

ExperimentConfig small_full() {
    ExperimentConfig c;
    c.params = ModelParams{1.0, 0.5, Kernel::exponential(0.5, 1.0), 7};
    c.N = 16;
    c.K = 8;
    c.t = 64.0;
    c.replicates = 8;
    c.master_seed = 4242;
    return c;
}

} // namespace

TEST_CASE("ks distance behaves") {
    Xoshiro256pp rng(2024);
    std::vector<double> normals;
    for (int i = 0; i < 1000; ++i) normals.push_back(rng.normal());
    CHECK(stats::ks_distance_normal(normals, 1.0) < 0.06);

    std::vector<double> constant(50, 0.0);
    CHECK(stats::ks_distance_normal(constant, 1.0) >= 0.5);

    std::vector<double> flipped;
    for (double x : normals) flipped.push_back(-x);
    CHECK(stats::ks_distance_normal(flipped, 1.0) ==
          doctest::Approx(stats::ks_distance_normal(normals, 1.0)).epsilon(1e-12));

    CHECK_THROWS_AS(stats::ks_distance_normal(normals, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(stats::ks_distance_normal({1.0, 2.0}, 1.0), std::invalid_argument);
}

TEST_CASE("single replicate leaves the spread undefined") {
    auto cfg = small_full();
    cfg.replicates = 1;
    const auto rep = run_experiment(cfg);
    CHECK(rep.records.size() == 1);
    CHECK(rep.records[0].ok);
    CHECK(!rep.sd_defined);
}

TEST_CASE("report is reproducible and scheduling independent") {
    auto cfg = small_full();
    cfg.workers = 1;
    const auto a = run_experiment(cfg);
    cfg.workers = 4;
    const auto b = run_experiment(cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].p_hat == b.records[i].p_hat);
        CHECK(a.records[i].epsilon == b.records[i].epsilon);
        CHECK(a.records[i].V == b.records[i].V);
        CHECK(a.records[i].X == b.records[i].X);
        CHECK(a.records[i].omega == b.records[i].omega);
    }
    CHECK(a.mean_p_hat == b.mean_p_hat);
}

TEST_CASE("full-mode records are sane") {
    const auto rep = run_experiment(small_full());
    CHECK(rep.excluded == 0);
    for (const auto& r : rep.records) {
        CHECK(r.ok);
        CHECK(r.p_hat >= 0.0);
        CHECK(r.p_hat <= 1.0);
        CHECK(r.epsilon > 0.0);
    }
    CHECK(rep.omega_fraction == 1.0);
}

TEST_CASE("config validation") {
    auto cfg = small_full();
    cfg.replicates = 0;
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);

    auto bad_mode = small_full();
    bad_mode.mode = RunMode::p_zero; // but p = 0.5
    CHECK_THROWS_AS(run_experiment(bad_mode), std::invalid_argument);
}

TEST_CASE("matrix mode: degenerate connection probabilities") {
    ExperimentConfig cfg;
    cfg.params = ModelParams{1.0, 0.0, Kernel::exponential(0.5, 1.0), 7};
    cfg.N = 32;
    cfg.K = 16;
    cfg.replicates = 25;
    cfg.mode = RunMode::matrix_only;
    cfg.master_seed = 7;
    const auto rep = run_matrix_experiment(cfg);
    for (const auto& r : rep.records) CHECK(r.V == 0.0);
    CHECK(!rep.ks_valid); // v* = 0: reference distribution degenerate

    cfg.params.p = 1.0;
    const auto ones = run_matrix_experiment(cfg);
    for (const auto& r : ones.records) CHECK(std::abs(r.V) < 1e-18);
}

TEST_CASE("matrix mode summarizes the scaled error") {
    ExperimentConfig cfg;
    cfg.params = ModelParams{1.0, 0.5, Kernel::exponential(0.5, 1.0), 7};
    cfg.N = 128;
    cfg.K = 64;
    cfg.replicates = 60;
    cfg.mode = RunMode::matrix_only;
    cfg.master_seed = 99;
    const auto rep = run_matrix_experiment(cfg);
    CHECK(rep.v_star == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(rep.excluded == 0);
    CHECK(rep.sd_defined);
    CHECK(rep.ks_valid);
    CHECK(rep.scaling.size() == 1);
    CHECK(rep.scaling[0].mean_sq_err > 0.0);
}

TEST_CASE("block-limit error shrinks roughly like 1/K") {
    ExperimentConfig cfg;
    cfg.params = ModelParams{1.0, 0.5, Kernel::exponential(0.5, 1.0), 7};
    cfg.N = 100;
    cfg.K = 50;
    cfg.replicates = 300;
    cfg.mode = RunMode::matrix_only;
    cfg.master_seed = 11;

    auto l1_err = [&](long n, int k, std::uint64_t seed) {
        auto c = cfg;
        c.N = n;
        c.K = k;
        c.master_seed = seed;
        const auto rep = run_matrix_experiment(c);
        const double w_star = limit_triple(c.params).w;
        double acc = 0.0;
        for (const auto& r : rep.records) acc += std::abs(r.X - w_star);
        return acc / static_cast<double>(rep.records.size());
    };
    const double coarse = l1_err(100, 50, 11);
    const double fine = l1_err(200, 100, 12);
    CHECK(coarse / fine > 1.2);
    CHECK(coarse / fine < 3.5);
}

TEST_CASE("omega fraction is high at the reference point") {
    ExperimentConfig cfg;
    cfg.params = ModelParams{1.0, 0.5, Kernel::exponential(0.5, 1.0), 7};
    cfg.N = 200;
    cfg.K = 200;
    cfg.replicates = 100;
    cfg.mode = RunMode::matrix_only;
    cfg.master_seed = 13;
    const auto rep = run_matrix_experiment(cfg);
    CHECK(rep.omega_fraction >= 0.99);
}

TEST_CASE("csv and json writers produce the promised layout") {
    const auto rep = run_experiment(small_full());
    write_replicates_csv(rep, "mc_replicates_test.csv");
    std::ifstream csv("mc_replicates_test.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "index,omega,p_hat,mu_hat,lambda_hat,epsilon,V,X,z");
    long rows = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == rep.config.replicates);
    std::remove("mc_replicates_test.csv");

    write_summary_json(rep, "mc_summary_test.json");
    std::ifstream js("mc_summary_test.json");
    std::string body((std::istreambuf_iterator<char>(js)), std::istreambuf_iterator<char>());
    CHECK(body.find("\"omega_fraction\"") != std::string::npos);
    CHECK(body.find("\"ci_coverage\"") != std::string::npos);
    std::remove("mc_summary_test.json");
}
