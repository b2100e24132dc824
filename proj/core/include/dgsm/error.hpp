#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dgsm {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  domain_error,
  non_finite,
  constant_model,
  unsupported_distribution,
  accuracy_unattainable,
  missing_reference,
  unknown_function,
  insufficient_data,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this exception; the code lets
// callers (the CLI in particular) map failures to stable exit statuses.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace dgsm
