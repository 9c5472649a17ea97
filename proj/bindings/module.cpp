#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "erhawkes/asymptotics.hpp"
#include "erhawkes/errors.hpp"
#include "erhawkes/estimators.hpp"
#include "erhawkes/hawkes_sim.hpp"
#include "erhawkes/matrix_oracle.hpp"
#include "erhawkes/mc_harness.hpp"
#include "erhawkes/random_graph.hpp"
#include "erhawkes/stats.hpp"

namespace py = pybind11;
using namespace erhawkes;

namespace {

ModelParams make_params(double mu, double p, const Kernel& kernel, int q) {
    return ModelParams{mu, p, kernel, q};
}

py::dict estimates_dict(const Estimates& e) {
    py::dict d;
    d["mu_hat"] = e.mu_hat;
    d["lambda_hat"] = e.lambda_hat;
    d["p_hat"] = e.p_hat;
    d["epsilon"] = e.raw.epsilon;
    d["V"] = e.raw.V;
    d["X"] = e.raw.X;
    d["Z_delta"] = e.raw.Z_delta;
    d["Z_2delta"] = e.raw.Z_2delta;
    d["W"] = e.raw.W;
    d["delta_t"] = e.raw.delta_t;
    return d;
}

RunMode parse_mode(const std::string& mode) {
    if (mode == "full") return RunMode::full;
    if (mode == "matrix_only") return RunMode::matrix_only;
    if (mode == "p_zero") return RunMode::p_zero;
    throw std::invalid_argument("mode must be full|matrix_only|p_zero");
}

ExperimentConfig make_config(const ModelParams& params, long N, int K, double t,
                             long replicates, std::uint64_t master_seed, const std::string& mode,
                             double separation_threshold, double alpha, int workers,
                             std::uint64_t max_events, int scaling_levels) {
    ExperimentConfig c;
    c.params = params;
    c.N = N;
    c.K = K;
    c.t = t;
    c.replicates = replicates;
    c.master_seed = master_seed;
    c.mode = parse_mode(mode);
    c.separation_threshold = separation_threshold;
    c.alpha = alpha;
    c.workers = workers;
    c.max_events = max_events;
    c.scaling_levels = scaling_levels;
    return c;
}

py::dict report_dict(const MCReport& r) {
    py::dict d;
    d["replicates"] = r.config.replicates;
    d["excluded"] = r.excluded;
    d["mean_z"] = r.mean_z;
    d["sd_z"] = r.sd_z;
    d["skew_z"] = r.skew_z;
    d["sd_defined"] = r.sd_defined;
    d["ks_distance"] = r.ks;
    d["ks_valid"] = r.ks_valid;
    d["theoretical_sd"] = r.theoretical_sd;
    d["ci_coverage"] = r.ci_coverage;
    d["omega_fraction"] = r.omega_fraction;
    d["mean_p_hat"] = r.mean_p_hat;
    d["sd_p_hat"] = r.sd_p_hat;
    d["frac_p_hat_below_0_1"] = r.frac_p_below_01;
    d["frac_p_hat_above_0_9"] = r.frac_p_above_09;
    d["regime_ambiguous"] = r.regime_ambiguous;
    d["v_star"] = r.v_star;
    d["runtime_sec"] = r.runtime_sec;

    const py::ssize_t n = static_cast<py::ssize_t>(r.records.size());
    py::array_t<double> p_hat(n), z(n), V(n), X(n), eps(n);
    py::array_t<bool> omega(n), ok(n);
    auto ph = p_hat.mutable_unchecked<1>();
    auto zs = z.mutable_unchecked<1>();
    auto vs = V.mutable_unchecked<1>();
    auto xs = X.mutable_unchecked<1>();
    auto es = eps.mutable_unchecked<1>();
    auto om = omega.mutable_unchecked<1>();
    auto oks = ok.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < n; ++i) {
        const auto& rec = r.records[static_cast<std::size_t>(i)];
        ph(i) = rec.p_hat;
        zs(i) = rec.z;
        vs(i) = rec.V;
        xs(i) = rec.X;
        es(i) = rec.epsilon;
        om(i) = rec.omega;
        oks(i) = rec.ok;
    }
    d["p_hat"] = p_hat;
    d["z"] = z;
    d["V"] = V;
    d["X"] = X;
    d["epsilon"] = eps;
    d["omega"] = omega;
    d["ok"] = ok;

    py::list scaling;
    for (const auto& row : r.scaling) {
        py::dict s;
        s["N"] = row.N;
        s["K"] = row.K;
        s["replicates"] = row.replicates;
        s["mean_sq_err"] = row.mean_sq_err;
        scaling.append(s);
    }
    d["scaling"] = scaling;
    return d;
}

} // namespace

PYBIND11_MODULE(_erhawkes, m) {
    m.doc() = "Partially observed mean-field Hawkes systems: exact simulation, moment "
              "estimators and Monte Carlo limit-theorem checks.";

    py::register_exception<SupercriticalModel>(m, "SupercriticalModel");
    py::register_exception<DegenerateSchedule>(m, "DegenerateSchedule");
    py::register_exception<ExplosionAbort>(m, "ExplosionAbort");
    py::register_exception<OracleDomainError>(m, "OracleDomainError");
    py::register_exception<SpectralFailure>(m, "SpectralFailure");
    py::register_exception<SeriesFailure>(m, "SeriesFailure");
    py::register_exception<MixedRegime>(m, "MixedRegime");
    py::register_exception<DegenerateEstimate>(m, "DegenerateEstimate");

    py::class_<Kernel>(m, "Kernel")
        .def_static("exponential", &Kernel::exponential, py::arg("alpha"), py::arg("beta"))
        .def_static("indicator", &Kernel::indicator, py::arg("height"), py::arg("width"))
        .def_static("zero", &Kernel::zero)
        .def("eval", &Kernel::eval, py::arg("t"))
        .def("total_mass", &Kernel::total_mass)
        .def("moment", &Kernel::moment, py::arg("q"))
        .def("l2_integral", &Kernel::l2_integral);

    m.def("kernel_stats", [](const Kernel& k, int q) {
        const auto s = kernel_stats(k, q);
        py::dict d;
        d["lambda"] = s.lambda;
        d["moment_q"] = s.moment_q;
        d["l2"] = s.l2;
        return d;
    });

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init(&make_params), py::arg("mu"), py::arg("p"), py::arg("kernel"),
             py::arg("q") = 7)
        .def_readonly("mu", &ModelParams::mu)
        .def_readonly("p", &ModelParams::p)
        .def_readonly("q", &ModelParams::q_moment);

    m.def("check_subcritical", [](const ModelParams& params) {
        const auto c = check_subcritical(params);
        py::dict d;
        d["branching"] = c.branching;
        d["a"] = c.a;
        d["c_p_lambda"] = c.c_p_lambda;
        return d;
    });

    py::class_<Adjacency>(m, "Adjacency")
        .def_static("sample", &Adjacency::sample, py::arg("n"), py::arg("p"), py::arg("seed"))
        .def("n", &Adjacency::n)
        .def("p", &Adjacency::p)
        .def("at", &Adjacency::at, py::arg("i"), py::arg("j"))
        .def("row_sums", [](const Adjacency& a) { return a.row_sums(); })
        .def("col_sums", [](const Adjacency& a) { return a.col_sums(); })
        .def("to_dense", [](const Adjacency& a) {
            py::array_t<std::uint8_t> out({a.n(), a.n()});
            auto v = out.mutable_unchecked<2>();
            for (int i = 0; i < a.n(); ++i)
                for (int j = 0; j < a.n(); ++j) v(i, j) = a.at(i, j) ? 1 : 0;
            return out;
        });

    m.def("check_events", [](const Adjacency& adj, double lambda_mass, int K) {
        const auto f = check_events(adj, lambda_mass, K);
        return py::make_tuple(f.omega, f.a_event);
    });

    py::class_<GraphAnalysis>(m, "GraphAnalysis")
        .def_readonly("ell_bar_K", &GraphAnalysis::ell_bar_K)
        .def_readonly("x_K_sq_norm", &GraphAnalysis::x_K_sq_norm)
        .def_readonly("V_inf", &GraphAnalysis::V_inf)
        .def_readonly("A_inf", &GraphAnalysis::A_inf)
        .def_readonly("W_inf", &GraphAnalysis::W_inf)
        .def_readonly("X_inf", &GraphAnalysis::X_inf)
        .def_property_readonly("ell",
                               [](const GraphAnalysis& g) { return py::cast(g.ell); })
        .def_property_readonly("c_K",
                               [](const GraphAnalysis& g) { return py::cast(g.c_K); });

    m.def("analyze_graph", &analyze_graph, py::arg("adj"), py::arg("lambda_mass"), py::arg("mu"),
          py::arg("K"));
    m.def("ell_bar_limit", &ell_bar_limit);
    m.def("limit_triple", [](const ModelParams& params) {
        const auto lt = limit_triple(params);
        return py::make_tuple(lt.u, lt.v, lt.w);
    });

    py::class_<EventLog>(m, "EventLog")
        .def_readonly("n", &EventLog::n)
        .def_readonly("horizon", &EventLog::horizon)
        .def("total_count", &EventLog::total_count)
        .def("count_at", &EventLog::count_at, py::arg("i"), py::arg("t"))
        .def("times", [](const EventLog& log, int i) {
            const auto& e = log.events.at(static_cast<std::size_t>(i));
            py::array_t<double> out(static_cast<py::ssize_t>(e.size()));
            auto v = out.mutable_unchecked<1>();
            for (py::ssize_t k = 0; k < out.size(); ++k)
                v(k) = e[static_cast<std::size_t>(k)];
            return out;
        });

    m.def(
        "simulate",
        [](const Adjacency& adj, const ModelParams& params, double horizon, std::uint64_t seed,
           std::uint64_t max_events, bool generic_path) {
            SimOptions opt;
            opt.max_events = max_events;
            opt.path = generic_path ? SimOptions::Path::generic : SimOptions::Path::automatic;
            return simulate(adj, params, horizon, seed, opt);
        },
        py::arg("adj"), py::arg("params"), py::arg("horizon"), py::arg("seed"),
        py::arg("max_events") = 100000000, py::arg("generic_path") = false);

    m.def(
        "simulate_cluster_oracle",
        [](const Adjacency& adj, const ModelParams& params, double horizon, std::uint64_t seed) {
            return simulate_cluster_oracle(adj, params, horizon, seed);
        },
        py::arg("adj"), py::arg("params"), py::arg("horizon"), py::arg("seed"));

    m.def("expected_counts", &expected_counts, py::arg("adj"), py::arg("params"), py::arg("t"),
          py::arg("grid_step"));

    m.def("delta_schedule", [](double t, int q) {
        const auto s = delta_schedule(t, q);
        return py::make_tuple(s.delta, s.half_blocks);
    });

    m.def("epsilon_hat", [](const EventLog& log, long N, int K, double t, int q) {
        return epsilon_hat(EstimatorInput{log, N, K, t, q});
    });
    m.def("V_hat", [](const EventLog& log, long N, int K, double t, int q) {
        return V_hat(EstimatorInput{log, N, K, t, q});
    });
    m.def("X_hat", [](const EventLog& log, long N, int K, double t, int q) {
        return X_hat(EstimatorInput{log, N, K, t, q});
    });
    m.def("estimate", [](const EventLog& log, long N, int K, double t, int q) {
        return estimates_dict(estimate(EstimatorInput{log, N, K, t, q}));
    });
    m.def("estimate_from_raw", [](double eps, double V, double X) {
        return estimates_dict(estimate_from_raw(eps, V, X));
    });

    m.def("psi1", &psi1);
    m.def("psi2", &psi2);
    m.def("psi3", &psi3);

    m.def("rate_terms",
          [](long N, long K, double t, int q, double threshold) {
              const auto r = rate_terms(N, K, t, q, threshold);
              py::dict d;
              d["r1"] = r.r1;
              d["r2"] = r.r2;
              d["r3"] = r.r3;
              d["gamma"] = r.gamma;
              d["delta_t"] = r.delta_t;
              d["separation"] = r.separation;
              d["largest"] = to_string(r.largest);
              d["dominant"] = to_string(r.dominant);
              return d;
          },
          py::arg("N"), py::arg("K"), py::arg("t"), py::arg("q"),
          py::arg("separation_threshold") = 5.0);

    m.def("theoretical_law",
          [](const ModelParams& params, long N, long K, double t, double threshold) {
              const auto law = theoretical_law(params,
                                               rate_terms(N, K, t, params.q_moment, threshold));
              py::dict d;
              d["regime"] = to_string(law.regime);
              d["scale"] = law.scale;
              d["variance"] = law.variance;
              return d;
          },
          py::arg("params"), py::arg("N"), py::arg("K"), py::arg("t"),
          py::arg("separation_threshold") = 5.0);

    m.def(
        "combined_normalizer",
        [](double mu_hat, double lambda_hat, double p_hat, long N, long K, double t,
           double delta_t, double gamma) {
            Estimates e;
            e.mu_hat = mu_hat;
            e.lambda_hat = lambda_hat;
            e.p_hat = p_hat;
            return combined_normalizer(e, N, K, t, delta_t, gamma);
        },
        py::arg("mu_hat"), py::arg("lambda_hat"), py::arg("p_hat"), py::arg("N"), py::arg("K"),
        py::arg("t"), py::arg("delta_t"), py::arg("gamma"));

    m.def(
        "confidence_interval",
        [](double mu_hat, double lambda_hat, double p_hat, long N, long K, double t,
           double delta_t, double gamma, double alpha) {
            Estimates e;
            e.mu_hat = mu_hat;
            e.lambda_hat = lambda_hat;
            e.p_hat = p_hat;
            return confidence_interval(e, N, K, t, delta_t, gamma, alpha);
        },
        py::arg("mu_hat"), py::arg("lambda_hat"), py::arg("p_hat"), py::arg("N"), py::arg("K"),
        py::arg("t"), py::arg("delta_t"), py::arg("gamma"), py::arg("alpha"));

    m.def("normal_quantile", &stats::normal_quantile);
    m.def("ks_distance", [](std::vector<double> samples, double sd) {
        return stats::ks_distance_normal(std::move(samples), sd);
    });

    m.def(
        "run_experiment",
        [](const ModelParams& params, long N, int K, double t, long replicates,
           std::uint64_t master_seed, const std::string& mode, double separation_threshold,
           double alpha, int workers, std::uint64_t max_events, int scaling_levels) {
            return report_dict(run_experiment(
                make_config(params, N, K, t, replicates, master_seed, mode,
                            separation_threshold, alpha, workers, max_events, scaling_levels)));
        },
        py::arg("params"), py::arg("N"), py::arg("K"), py::arg("t"), py::arg("replicates"),
        py::arg("master_seed") = 1, py::arg("mode") = "full",
        py::arg("separation_threshold") = 5.0, py::arg("alpha") = 0.05, py::arg("workers") = 0,
        py::arg("max_events") = 100000000, py::arg("scaling_levels") = 1);

    m.def(
        "run_matrix_experiment",
        [](const ModelParams& params, long N, int K, long replicates, std::uint64_t master_seed,
           double alpha, int workers, int scaling_levels) {
            return report_dict(run_matrix_experiment(
                make_config(params, N, K, 1.0, replicates, master_seed, "matrix_only", 5.0,
                            alpha, workers, 100000000, scaling_levels)));
        },
        py::arg("params"), py::arg("N"), py::arg("K"), py::arg("replicates"),
        py::arg("master_seed") = 1, py::arg("alpha") = 0.05, py::arg("workers") = 0,
        py::arg("scaling_levels") = 1);
}
