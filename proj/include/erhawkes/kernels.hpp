#pragma once

#include <string>

namespace erhawkes {

enum class KernelType { exponential, indicator, zero };

// Memory kernel phi: [0,inf) -> [0,inf). All variants are non-increasing
// (required by the thinning sampler) and have finite moments of every order.
//
//   exponential: phi(t) = alpha * exp(-beta * t)
//   indicator:   phi(t) = height * 1[0, width](t)
//   zero:        phi == 0
class Kernel {
  public:
    static Kernel exponential(double alpha, double beta);
    static Kernel indicator(double height, double width);
    static Kernel zero();

    KernelType type() const { return type_; }
    double alpha() const { return a_; }
    double beta() const { return b_; }
    double height() const { return a_; }
    double width() const { return b_; }

    // phi(t); rejects t < 0.
    double eval(double t) const;

    // Lambda = integral of phi over [0, inf).
    double total_mass() const;

    // integral of s^q phi(s) ds, q >= 1.
    double moment(int q) const;

    // integral of phi(s)^2 ds.
    double l2_integral() const;

    // An age A such that phi(s) <= eps for all s >= A.
    double support_bound(double eps) const;

  private:
    Kernel(KernelType t, double a, double b) : type_(t), a_(a), b_(b) {}
    KernelType type_;
    double a_; // alpha / height
    double b_; // beta / width
};

struct KernelStats {
    double lambda;   // Lambda
    double moment_q; // integral s^q phi
    double l2;       // integral phi^2
};

KernelStats kernel_stats(const Kernel& kernel, int q);

struct ModelParams {
    double mu = 1.0;       // baseline rate, > 0
    double p = 0.5;        // connection probability in [0, 1]
    Kernel kernel = Kernel::zero();
    int q_moment = 7;      // q used by the block schedule
};

struct SubcriticalConstants {
    double branching;  // Lambda * p
    double a;          // (1 + Lambda p) / 2
    double c_p_lambda; // (1 - Lambda p)^2 / (2 Lambda^2); +inf when Lambda = 0
};

// Derived constants when Lambda p < 1, otherwise throws SupercriticalModel
// with a message naming the failed inequality.
SubcriticalConstants check_subcritical(const ModelParams& params);

std::string to_string(KernelType type);

} // namespace erhawkes
