#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <utility>

namespace safectrl {

// Input with wrong dimensions or values outside the documented domain.
struct RejectedInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Integration produced a non-finite state; carries the offending state.
struct NumericalBlowupError : std::runtime_error {
    Eigen::VectorXd state;
    NumericalBlowupError(const std::string& msg, Eigen::VectorXd bad_state)
        : std::runtime_error(msg), state(std::move(bad_state)) {}
};

// Robot and obstacle critical points coincide; the safety index is singular there.
struct CoincidentPointsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Distance comparable to the finite-difference step; gradient is unreliable.
struct IllConditionedGradientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Innovation covariance is numerically singular.
struct SingularInnovationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace safectrl
