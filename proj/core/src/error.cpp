#include "dgsm/error.hpp"

namespace dgsm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::domain_error: return "point outside domain";
    case ErrorCode::non_finite: return "non-finite value";
    case ErrorCode::constant_model: return "constant model";
    case ErrorCode::unsupported_distribution: return "unsupported distribution";
    case ErrorCode::accuracy_unattainable: return "accuracy unattainable";
    case ErrorCode::missing_reference: return "missing analytic reference";
    case ErrorCode::unknown_function: return "unknown function";
    case ErrorCode::insufficient_data: return "insufficient data";
  }
  return "unknown error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace dgsm
