#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slope {

enum class ErrorCode {
  out_of_domain,
  non_differentiable,
  not_invertible,
  out_of_range,
  apex_singularity,
  zero_vector,
  degenerate_denominator,
  no_root,
  stencil_out_of_cone,
  insufficient_directions,
  derivative_blowup,
  left_convex_domain,
  step_too_large,
  invalid_argument,
  config_error,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::out_of_domain: return "OutOfDomain";
    case ErrorCode::non_differentiable: return "NonDifferentiable";
    case ErrorCode::not_invertible: return "NotInvertible";
    case ErrorCode::out_of_range: return "OutOfRange";
    case ErrorCode::apex_singularity: return "ApexSingularity";
    case ErrorCode::zero_vector: return "ZeroVector";
    case ErrorCode::degenerate_denominator: return "DegenerateDenominator";
    case ErrorCode::no_root: return "NoRoot";
    case ErrorCode::stencil_out_of_cone: return "StencilOutOfCone";
    case ErrorCode::insufficient_directions: return "InsufficientDirections";
    case ErrorCode::derivative_blowup: return "DerivativeBlowup";
    case ErrorCode::left_convex_domain: return "LeftConvexDomain";
    case ErrorCode::step_too_large: return "StepTooLarge";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::config_error: return "ConfigError";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace slope
