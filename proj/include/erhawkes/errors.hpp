#pragma once

#include <stdexcept>
#include <string>

namespace erhawkes {

// Model violates the subcriticality requirement (Lambda * p must be < 1).
struct SupercriticalModel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The block schedule collapsed: floor(t^(1-4/(q+1))) = 0, t too small.
struct DegenerateSchedule : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Simulation exceeded the hard event-count cap.
struct ExplosionAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cluster-oracle preconditions (small N, subcritical rows) not met.
struct OracleDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Linear system (I - Lambda A) is out of the solver's contraction domain,
// or the post-solve residual check failed.
struct SpectralFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Convolution series failed to converge within the term budget.
struct SeriesFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No single rate term dominates under the separation rule.
struct MixedRegime : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A plug-in estimate made a normalizer denominator non-positive.
struct DegenerateEstimate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad configuration file, key, value or input file.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace erhawkes
