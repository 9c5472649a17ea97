#pragma once

#include <vector>

#include "erhawkes/kernels.hpp"
#include "erhawkes/random_graph.hpp"

namespace erhawkes {

// Scalar and vector quantities derived from Q_N = (I - Lambda A_N)^(-1),
// computed through two linear solves; Q_N itself is never formed.
struct GraphAnalysis {
    std::vector<double> ell;  // ell(i) = sum_j Q_N(i, j)
    std::vector<double> c_K;  // c_K(j) = sum_{i<=K} Q_N(i, j)
    double ell_bar_K = 0.0;   // mean of ell over the first K entries
    double x_K_sq_norm = 0.0; // sum_{i<=K} (ell(i) - ell_bar_K)^2
    double V_inf = 0.0;       // N mu^2 / K * x_K_sq_norm
    double A_inf = 0.0;       // sum_j c_K(j)^2 ell(j)
    double W_inf = 0.0;       // mu N / K^2 * A_inf
    double X_inf = 0.0;       // W_inf - (N-K) mu / K * ell_bar_K
};

// Solves (I - Lambda A)ell = 1 and (I - Lambda A^T)c = 1_K by Gauss-Seidel
// sweeps and derives the limit quantities. Requires Lambda |||A|||_1 < 1 and
// Lambda |||A|||_inf < 1 (contraction domain); a residual above 1e-8 after
// the sweep budget raises SpectralFailure.
GraphAnalysis analyze_graph(const Adjacency& adj, double lambda_mass, double mu, int K);

// 1 / (1 - Lambda p).
double ell_bar_limit(const ModelParams& params);

struct LimitTriple {
    double u; // mu / (1 - Lambda p)
    double v; // mu^2 Lambda^2 p (1-p) / (1 - Lambda p)^2
    double w; // mu / (1 - Lambda p)^3
};

LimitTriple limit_triple(const ModelParams& params);

} // namespace erhawkes
