#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace goucb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Caller passed an argument that violates a precondition.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Internal state and supplied data disagree (e.g. history/covariance drift).
struct StateError : std::logic_error {
    using std::logic_error::logic_error;
};

/// A numerical routine produced non-finite values or a factorization failed.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Run configuration is inconsistent or incomplete.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace goucb
