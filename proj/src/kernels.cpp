#include "erhawkes/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "erhawkes/errors.hpp"

namespace erhawkes {

Kernel Kernel::exponential(double alpha, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("exponential kernel: beta must be > 0");
    if (!(alpha >= 0.0)) throw std::invalid_argument("exponential kernel: alpha must be >= 0");
    return Kernel(KernelType::exponential, alpha, beta);
}

Kernel Kernel::indicator(double height, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("indicator kernel: width must be > 0");
    if (!(height >= 0.0)) throw std::invalid_argument("indicator kernel: height must be >= 0");
    return Kernel(KernelType::indicator, height, width);
}

Kernel Kernel::zero() { return Kernel(KernelType::zero, 0.0, 0.0); }

double Kernel::eval(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("kernel eval: t must be >= 0");
    switch (type_) {
        case KernelType::exponential: return a_ * std::exp(-b_ * t);
        case KernelType::indicator: return t <= b_ ? a_ : 0.0;
        case KernelType::zero: return 0.0;
    }
    return 0.0;
}

double Kernel::total_mass() const {
    switch (type_) {
        case KernelType::exponential: return a_ / b_;
        case KernelType::indicator: return a_ * b_;
        case KernelType::zero: return 0.0;
    }
    return 0.0;
}

double Kernel::moment(int q) const {
    if (q < 1) throw std::invalid_argument("kernel moment: q must be >= 1");
    switch (type_) {
        case KernelType::exponential: {
            // alpha * q! / beta^(q+1); exact factorial loop up to the double
            // overflow boundary, lgamma beyond.
            if (q <= 170) {
                double fact = 1.0;
                for (int k = 2; k <= q; ++k) fact *= static_cast<double>(k);
                return a_ * fact / std::pow(b_, q + 1);
            }
            return a_ * std::exp(std::lgamma(q + 1.0) - (q + 1.0) * std::log(b_));
        }
        case KernelType::indicator:
            return a_ * std::pow(b_, q + 1) / static_cast<double>(q + 1);
        case KernelType::zero: return 0.0;
    }
    return 0.0;
}

double Kernel::l2_integral() const {
    switch (type_) {
        case KernelType::exponential: return a_ * a_ / (2.0 * b_);
        case KernelType::indicator: return a_ * a_ * b_;
        case KernelType::zero: return 0.0;
    }
    return 0.0;
}

double Kernel::support_bound(double eps) const {
    switch (type_) {
        case KernelType::exponential:
            if (a_ <= eps) return 0.0;
            return std::log(a_ / eps) / b_;
        case KernelType::indicator: return a_ <= eps ? 0.0 : b_;
        case KernelType::zero: return 0.0;
    }
    return 0.0;
}

KernelStats kernel_stats(const Kernel& kernel, int q) {
    return KernelStats{kernel.total_mass(), kernel.moment(q), kernel.l2_integral()};
}

SubcriticalConstants check_subcritical(const ModelParams& params) {
    const double lambda = params.kernel.total_mass();
    const double branching = lambda * params.p;
    if (!(branching < 1.0)) {
        std::ostringstream msg;
        msg << "supercritical model: Lambda*p = " << branching << " >= 1";
        throw SupercriticalModel(msg.str());
    }
    SubcriticalConstants c;
    c.branching = branching;
    c.a = 0.5 * (1.0 + branching);
    c.c_p_lambda = lambda > 0.0
                       ? (1.0 - branching) * (1.0 - branching) / (2.0 * lambda * lambda)
                       : std::numeric_limits<double>::infinity();
    return c;
}

std::string to_string(KernelType type) {
    switch (type) {
        case KernelType::exponential: return "exponential";
        case KernelType::indicator: return "indicator";
        case KernelType::zero: return "zero";
    }
    return "unknown";
}

} // namespace erhawkes
