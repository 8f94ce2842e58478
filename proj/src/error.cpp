#include "bjapprox/error.hpp"

namespace bjapprox {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_exponent: return "invalid exponent";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::degenerate_input: return "degenerate input";
    case ErrorCode::degenerate_subspace: return "degenerate subspace";
    case ErrorCode::invalid_input: return "invalid input";
    case ErrorCode::invalid_parameter: return "invalid parameter";
    case ErrorCode::rank_deficient: return "rank deficient";
    case ErrorCode::internal_inconsistency: return "internal inconsistency";
    case ErrorCode::capacity: return "capacity exceeded";
    case ErrorCode::precondition: return "precondition violated";
  }
  return "unknown error";
}

}  // namespace bjapprox
