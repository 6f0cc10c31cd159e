#pragma once

/**
 * @file types.hpp
 * @brief Scalar/vector/matrix aliases and the error taxonomy shared by all
 *        switchopt modules.
 */

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace switchopt {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/** @brief Stable error classes, also used verbatim in CLI reports. */
enum class ErrorCode {
    MonotonicityViolation,
    OutOfHorizon,
    MissingReset,
    MissingJacobian,
    BlowUp,
    NonFiniteState,
    OutOfDomain,
    ScheduleMismatch,
    ChainPropertyViolation,
    UnknownScenario,
    BadParams,
    ConfigError,
};

[[nodiscard]] inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
        case ErrorCode::OutOfHorizon: return "OutOfHorizon";
        case ErrorCode::MissingReset: return "MissingReset";
        case ErrorCode::MissingJacobian: return "MissingJacobian";
        case ErrorCode::BlowUp: return "BlowUp";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::ScheduleMismatch: return "ScheduleMismatch";
        case ErrorCode::ChainPropertyViolation: return "ChainPropertyViolation";
        case ErrorCode::UnknownScenario: return "UnknownScenario";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/** @brief Exception carrying a machine-readable error class. */
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace switchopt
