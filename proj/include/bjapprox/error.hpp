#pragma once

#include <stdexcept>
#include <string>

namespace bjapprox {

enum class ErrorCode {
  invalid_exponent,
  dimension_mismatch,
  degenerate_input,
  degenerate_subspace,
  invalid_input,
  invalid_parameter,
  rank_deficient,
  internal_inconsistency,
  capacity,
  precondition,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bjapprox
