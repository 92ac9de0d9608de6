#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qwalk {

/// Error categories surfaced by the library. The CLI maps them onto exit codes.
enum class ErrorCode {
  invalid_dimension,
  dimension_mismatch,
  coloring_impossible,
  invalid_generator,
  missing_metadata,
  range,
  symmetry_violation,
  unitarity_violation,
  normalization,
  wrong_kind,
  connectivity,
  resource,
  insufficient_data,
  invalid_group,
  parse,
};

inline std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::dimension_mismatch: return "dimension";
    case ErrorCode::coloring_impossible: return "coloring-impossible";
    case ErrorCode::invalid_generator: return "invalid-generator";
    case ErrorCode::missing_metadata: return "missing-metadata";
    case ErrorCode::range: return "range";
    case ErrorCode::symmetry_violation: return "symmetry-violation";
    case ErrorCode::unitarity_violation: return "unitarity-violation";
    case ErrorCode::normalization: return "normalization";
    case ErrorCode::wrong_kind: return "kind";
    case ErrorCode::connectivity: return "connectivity";
    case ErrorCode::resource: return "resource";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::invalid_group: return "invalid-group";
    case ErrorCode::parse: return "parse";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + " error: " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qwalk
