#include "erhawkes/matrix_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "erhawkes/errors.hpp"

namespace erhawkes {

namespace {

// Row-major 0/1 matrix expanded to int8 so a sweep streams 1 byte per
// entry; dot products run in float first and are polished in double.
std::vector<std::int8_t> expand_bits(const Adjacency& adj) {
    const int n = adj.n();
    std::vector<std::int8_t> m(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        std::int8_t* out = m.data() + static_cast<std::size_t>(i) * n;
        const std::uint64_t* row = adj.row_words(i);
        for (int j = 0; j < n; ++j)
            out[j] = static_cast<std::int8_t>((row[j >> 6] >> (j & 63)) & 1ULL);
    }
    return m;
}

std::vector<std::int8_t> transpose_blocked(const std::vector<std::int8_t>& m, int n) {
    std::vector<std::int8_t> t(m.size());
    constexpr int B = 128;
    for (int ib = 0; ib < n; ib += B)
        for (int jb = 0; jb < n; jb += B) {
            const int imax = std::min(ib + B, n), jmax = std::min(jb + B, n);
            for (int i = ib; i < imax; ++i)
                for (int j = jb; j < jmax; ++j)
                    t[static_cast<std::size_t>(j) * n + i] = m[static_cast<std::size_t>(i) * n + j];
        }
    return t;
}

// Eight independent accumulator chains so the strict-FP reduction still
// pipelines; summation order is fixed, results are deterministic.
template <class Real>
Real dot01(const std::int8_t* row, const Real* x, int n) {
    Real a0 = 0, a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0, a7 = 0;
    int j = 0;
    for (; j + 8 <= n; j += 8) {
        a0 += static_cast<Real>(row[j]) * x[j];
        a1 += static_cast<Real>(row[j + 1]) * x[j + 1];
        a2 += static_cast<Real>(row[j + 2]) * x[j + 2];
        a3 += static_cast<Real>(row[j + 3]) * x[j + 3];
        a4 += static_cast<Real>(row[j + 4]) * x[j + 4];
        a5 += static_cast<Real>(row[j + 5]) * x[j + 5];
        a6 += static_cast<Real>(row[j + 6]) * x[j + 6];
        a7 += static_cast<Real>(row[j + 7]) * x[j + 7];
    }
    for (; j < n; ++j) a0 += static_cast<Real>(row[j]) * x[j];
    return ((a0 + a1) + (a2 + a3)) + ((a4 + a5) + (a6 + a7));
}

// Gauss-Seidel sweeps for x = rhs + c * M x, M row-major 0/1. In-place
// update, so row i uses fresh values for j < i. Two phases: float sweeps to
// single precision, then double sweeps to full precision. The caller
// guarantees the contraction domain; the final residual is checked anyway.
void gauss_seidel_solve(const std::vector<std::int8_t>& m, int n, double c,
                        const std::vector<double>& rhs, std::vector<double>& x,
                        double tol, const char* what) {
    std::vector<float> xf(rhs.begin(), rhs.end());
    const float cf = static_cast<float>(c);
    for (int sweep = 0; sweep < 60; ++sweep) {
        float delta = 0.0f;
        for (int i = 0; i < n; ++i) {
            const std::int8_t* row = m.data() + static_cast<std::size_t>(i) * n;
            const float next = static_cast<float>(rhs[i]) + cf * dot01(row, xf.data(), n);
            delta = std::max(delta, std::abs(next - xf[i]));
            xf[i] = next;
        }
        if (delta <= 1e-5f * (1.0f + std::abs(xf[0]))) break;
    }

    x.assign(xf.begin(), xf.end());
    for (int sweep = 0; sweep < 10000; ++sweep) {
        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            const std::int8_t* row = m.data() + static_cast<std::size_t>(i) * n;
            const double next = rhs[i] + c * dot01(row, x.data(), n);
            delta = std::max(delta, std::abs(next - x[i]));
            x[i] = next;
        }
        if (delta <= 1e-12 * (1.0 + std::abs(x[0]))) break;
    }

    double residual = 0.0;
    for (int i = 0; i < n; ++i) {
        const std::int8_t* row = m.data() + static_cast<std::size_t>(i) * n;
        residual = std::max(residual, std::abs(x[i] - c * dot01(row, x.data(), n) - rhs[i]));
    }
    if (!(residual <= tol)) {
        std::ostringstream msg;
        msg << what << ": residual " << residual << " exceeds " << tol
            << " after Gauss-Seidel sweeps";
        throw SpectralFailure(msg.str());
    }
}

} // namespace

GraphAnalysis analyze_graph(const Adjacency& adj, double lambda_mass, double mu, int K) {
    const int n = adj.n();
    if (K < 1 || K > n) throw std::invalid_argument("analyze_graph: need 1 <= K <= n");
    if (!(lambda_mass >= 0.0)) throw std::invalid_argument("analyze_graph: Lambda must be >= 0");

    std::uint32_t max_row = 0, max_col = 0;
    for (int i = 0; i < n; ++i) max_row = std::max(max_row, adj.row_sum(i));
    for (int j = 0; j < n; ++j) max_col = std::max(max_col, adj.col_sum(j));
    const double dn = static_cast<double>(n);
    if (!(lambda_mass * max_row / dn < 1.0 && lambda_mass * max_col / dn < 1.0)) {
        std::ostringstream msg;
        msg << "analyze_graph: Lambda * max norm of A_N = "
            << lambda_mass * std::max(max_row, max_col) / dn << " >= 1, system may be singular";
        throw SpectralFailure(msg.str());
    }

    GraphAnalysis g;
    const double c = lambda_mass / dn;
    const std::vector<double> ones(n, 1.0);
    std::vector<double> rhs_k(n, 0.0);
    std::fill(rhs_k.begin(), rhs_k.begin() + K, 1.0);

    {
        std::vector<std::int8_t> m = expand_bits(adj);
        gauss_seidel_solve(m, n, c, ones, g.ell, 1e-8, "ell solve");
        std::vector<std::int8_t> mt = transpose_blocked(m, n);
        m.clear();
        m.shrink_to_fit();
        gauss_seidel_solve(mt, n, c, rhs_k, g.c_K, 1e-8, "c_K solve");
    }

    double sum_k = 0.0;
    for (int i = 0; i < K; ++i) sum_k += g.ell[i];
    g.ell_bar_K = sum_k / static_cast<double>(K);

    double xsq = 0.0;
    for (int i = 0; i < K; ++i) {
        double d = g.ell[i] - g.ell_bar_K;
        xsq += d * d;
    }
    g.x_K_sq_norm = xsq;
    g.V_inf = dn * mu * mu / static_cast<double>(K) * xsq;

    double a_inf = 0.0;
    for (int j = 0; j < n; ++j) a_inf += g.c_K[j] * g.c_K[j] * g.ell[j];
    g.A_inf = a_inf;
    g.W_inf = mu * dn / (static_cast<double>(K) * static_cast<double>(K)) * a_inf;
    g.X_inf = g.W_inf - static_cast<double>(n - K) * mu / static_cast<double>(K) * g.ell_bar_K;
    return g;
}

double ell_bar_limit(const ModelParams& params) {
    const auto sc = check_subcritical(params);
    return 1.0 / (1.0 - sc.branching);
}

LimitTriple limit_triple(const ModelParams& params) {
    const auto sc = check_subcritical(params);
    const double lambda = params.kernel.total_mass();
    const double one_minus = 1.0 - sc.branching;
    LimitTriple lt;
    lt.u = params.mu / one_minus;
    lt.v = params.mu * params.mu * lambda * lambda * params.p * (1.0 - params.p) /
           (one_minus * one_minus);
    lt.w = params.mu / (one_minus * one_minus * one_minus);
    return lt;
}

} // namespace erhawkes
