#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace revca {

// Stable, machine-readable failure kinds. The CLI maps each to its own exit
// status, so the numeric values are part of the external interface.
enum class ErrorCode : int {
  invalid_lattice = 10,
  invalid_site = 11,
  invalid_rule = 12,
  invalid_modulus = 13,
  degenerate_perturbation = 14,
  dimension_cap_exceeded = 20,
  dimension_mismatch = 21,
  class_mismatch = 22,
  invalid_order = 23,
  non_unitary = 24,
  invalid_cut = 25,
  invalid_state = 26,
  invalid_config = 30,
  invariant_failed = 31,
  io_error = 32,
  usage = 33,
  internal = 70,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_lattice: return "invalid_lattice";
    case ErrorCode::invalid_site: return "invalid_site";
    case ErrorCode::invalid_rule: return "invalid_rule";
    case ErrorCode::invalid_modulus: return "invalid_modulus";
    case ErrorCode::degenerate_perturbation: return "degenerate_perturbation";
    case ErrorCode::dimension_cap_exceeded: return "dimension_cap_exceeded";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::class_mismatch: return "class_mismatch";
    case ErrorCode::invalid_order: return "invalid_order";
    case ErrorCode::non_unitary: return "non_unitary";
    case ErrorCode::invalid_cut: return "invalid_cut";
    case ErrorCode::invalid_state: return "invalid_state";
    case ErrorCode::invalid_config: return "invalid_config";
    case ErrorCode::invariant_failed: return "invariant_failed";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::usage: return "usage";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace revca
